#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "siegel/smallmat.hpp"

namespace siegel {

using IMat2 = Mat2<std::int64_t>;

// One representative (c, d) of a left coset of the Siegel parabolic in
// Sp(4, Z), stored in Hermite-canonical form together with a full symplectic
// completion.
struct CosetRep {
  IMat2 c, d;
  Mat4<std::int64_t> witness;  // (a b; c d) in Sp(4, Z)

  Mat4d witness_d() const {
    return map_mat4(witness, [](std::int64_t v) { return double(v); });
  }
  Mat2d cd() const { return map_mat2(c, [](std::int64_t v) { return double(v); }); }
  Mat2d dd() const { return map_mat2(d, [](std::int64_t v) { return double(v); }); }
};

// c d^T = d c^T
bool is_symmetric_pair(const IMat2& c, const IMat2& d);
// gcd of the six 2x2 minors of (c | d) equals 1
bool is_coprime_pair(const IMat2& c, const IMat2& d);

// canonical form of (c | d) under left multiplication by GL(2, Z);
// rows of the returned 2x4 matrix are (c | d) in row Hermite normal form
std::array<std::array<std::int64_t, 4>, 2> pair_canonical_form(const IMat2& c,
                                                               const IMat2& d);

// complete a symmetric coprime pair to an integral symplectic matrix
Mat4<std::int64_t> complete_to_symplectic(const IMat2& c, const IMat2& d);

// One representative per coset class discovered with max |entry| of (c, d)
// bounded by height_bound; the identity class (0, I) is always present.
// Deterministic: sorted by canonical form.
std::vector<CosetRep> enumerate_cosets(int height_bound);

std::string cosets_to_csv(const std::vector<CosetRep>& reps);

}  // namespace siegel
