#include <random>

#include "doctest.h"
#include "siegel/sp4.hpp"

using namespace siegel;

namespace {

LieElement scaled(const LieElement& x, long s) {
  return map_mat4(x, [&](const GaussQ& g) { return g * GaussQ(s); });
}

bool zero(const LieElement& x) {
  for (const auto& v : x.e)
    if (!v.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("basis lies in sp4 and splits under the involution") {
  BasisTable t = construct_basis();
  for (int i = 0; i < BasisTable::kSize; ++i) CHECK(in_sp4(t.elem(i)));

  // first four elements compact, last six noncompact
  for (int i = 0; i < 4; ++i) CHECK(is_compact_part(t.elem(i)));
  for (int i = 4; i < 10; ++i) CHECK(is_noncompact_part(t.elem(i)));

  // theta is an involution
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    LieElement x = LieElement::zero();
    for (int i = 0; i < 10; ++i)
      x = x + scaled(t.elem(i), long(rng() % 7) - 3);
    CHECK(cartan_involution(cartan_involution(x)) == x);
  }
}

TEST_CASE("quoted bracket relations") {
  BasisTable t = construct_basis();
  CHECK(zero(bracket(t.elem("e_k"), t.elem("e_m+"))));
  CHECK(bracket(t.elem("e_k"), t.elem("h_m+")) == scaled(t.elem("e_m+"), -2));
  CHECK(bracket(t.elem("h_c"), t.elem("e_m-")) == scaled(t.elem("e_m-"), -2));
}

TEST_CASE("h_c and h_k act diagonally with the expected eigenvalues") {
  BasisTable t = construct_basis();
  // ad(h_c) = +2 on the m+ triple, -2 on the m- triple
  for (const char* nm : {"h_m+", "e_m+", "f_m+"})
    CHECK(bracket(t.elem("h_c"), t.elem(nm)) == scaled(t.elem(nm), 2));
  for (const char* nm : {"h_m-", "e_m-", "f_m-"})
    CHECK(bracket(t.elem("h_c"), t.elem(nm)) == scaled(t.elem(nm), -2));
  // ad(h_k) eigenvalues {+2, 0, -2} on each triple
  for (const char* side : {"+", "-"}) {
    std::string e = std::string("e_m") + side;
    std::string h = std::string("h_m") + side;
    std::string f = std::string("f_m") + side;
    CHECK(bracket(t.elem("h_k"), t.elem(e)) == scaled(t.elem(e), 2));
    CHECK(zero(bracket(t.elem("h_k"), t.elem(h))));
    CHECK(bracket(t.elem("h_k"), t.elem(f)) == scaled(t.elem(f), -2));
  }
  // compact sl2 triple is the customary one
  CHECK(bracket(t.elem("h_k"), t.elem("e_k")) == scaled(t.elem("e_k"), 2));
  CHECK(bracket(t.elem("h_k"), t.elem("f_k")) == scaled(t.elem("f_k"), -2));
  CHECK(bracket(t.elem("e_k"), t.elem("f_k")) == t.elem("h_k"));
  // h_c is central in the compact part
  for (const char* nm : {"h_k", "e_k", "f_k"})
    CHECK(zero(bracket(t.elem("h_c"), t.elem(nm))));
}

TEST_CASE("dimensions and coordinates") {
  BasisTable t = construct_basis();
  // the ten elements span: coordinates of each basis element are unit vectors
  for (int i = 0; i < 10; ++i) {
    auto c = t.coordinates(t.elem(i));
    for (int j = 0; j < 10; ++j) CHECK(c[j] == (i == j ? GaussQ(1) : GaussQ(0)));
  }
  // an element outside sp4 is rejected
  LieElement bad = LieElement::zero();
  bad(0, 0) = GaussQ(1);  // (a 0; 0 -a^T) needs bad(2,2) = -1
  CHECK_THROWS_AS(t.coordinates(bad), std::domain_error);
}

TEST_CASE("jacobi identity on random triples, exactly") {
  BasisTable t = construct_basis();
  std::mt19937_64 rng(17);
  auto rnd_elem = [&] {
    LieElement x = LieElement::zero();
    for (int i = 0; i < 10; ++i) x = x + scaled(t.elem(i), long(rng() % 5) - 2);
    return x;
  };
  for (int trial = 0; trial < 200; ++trial) {
    LieElement x = rnd_elem(), y = rnd_elem(), z = rnd_elem();
    LieElement j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
                   bracket(z, bracket(x, y));
    CHECK(zero(j));
  }
}

TEST_CASE("bracket table expands brackets over the basis") {
  BasisTable t = construct_basis();
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      LieElement expect = bracket(t.elem(i), t.elem(j));
      LieElement got = LieElement::zero();
      const auto& coeffs = t.bracket_coeffs(i, j);
      for (int b = 0; b < 10; ++b)
        got = got + map_mat4(t.elem(b), [&](const GaussQ& g) { return g * coeffs[b]; });
      CHECK(got == expect);
      // antisymmetry
      LieElement neg = bracket(t.elem(j), t.elem(i));
      CHECK(expect + neg == LieElement::zero());
    }
}
