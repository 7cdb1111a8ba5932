#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "siegel/rational.hpp"
#include "siegel/smallmat.hpp"

namespace siegel {

using LieElement = Mat4<GaussQ>;

// block form (a b; c -a^T) with b, c symmetric
bool in_sp4(const LieElement& x);

LieElement bracket(const LieElement& x, const LieElement& y);

// theta(X) = -X^T; fixes the compact part, negates the rest
LieElement cartan_involution(const LieElement& x);

bool is_compact_part(const LieElement& x);   // theta(x) == x
bool is_noncompact_part(const LieElement& x);  // theta(x) == -x

// Chevalley-style basis of sp4 split along the Cartan decomposition.
// Order: h_c, h_k, e_k, f_k, h_m+, e_m+, f_m+, h_m-, e_m-, f_m-.
class BasisTable {
 public:
  static constexpr int kSize = 10;
  static const std::array<const char*, kSize>& names();

  const LieElement& elem(int i) const { return elems_[i]; }
  const LieElement& elem(std::string_view name) const { return elems_[index(name)]; }
  static int index(std::string_view name);

  // coefficients of [elem(i), elem(j)] over the basis
  const std::array<GaussQ, kSize>& bracket_coeffs(int i, int j) const {
    return table_[i][j];
  }

  // express an arbitrary element of sp4 over the basis
  std::array<GaussQ, kSize> coordinates(const LieElement& x) const;

 private:
  friend BasisTable construct_basis();
  std::array<LieElement, kSize> elems_;
  std::array<std::array<std::array<GaussQ, kSize>, kSize>, kSize> table_;
};

// Deterministic construction: the compact part comes from the isomorphism
// with gl2, the rest are simultaneous ad(h_c), ad(h_k) eigenvectors with the
// leading entry of each e-element normalized to 1 and h, f fixed through
// [e_k, h_m(+/-)] = -2 e_m(+/-) and [f_k, h_m(+/-)] = -2 f_m(+/-).
BasisTable construct_basis();

}  // namespace siegel
