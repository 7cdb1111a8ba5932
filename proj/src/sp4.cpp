#include "siegel/sp4.hpp"

#include <stdexcept>

namespace siegel {

namespace {

using GQ = GaussQ;
using M2 = Mat2<GQ>;

bool is_symmetric(const M2& m) { return m(0, 1) == m(1, 0); }

// inverse of the isomorphism k -> gl2, (a b; -b a) |-> a - i b
LieElement from_gl2(const M2& m) {
  GQ half(Rat(1, 2));
  GQ ihalf(Rat(0), Rat(1, 2));
  M2 mt = m.transposed();
  M2 a = (m - mt) * half;
  M2 b = (m + mt) * ihalf;
  return Mat4<GQ>::from_blocks(a, b, -b, a);
}

// the two ad(h_c) eigenspaces inside the noncompact part
LieElement m_plus(const M2& a) {
  GQ mi(Rat(0), Rat(-1));
  M2 b = a * mi;
  return Mat4<GQ>::from_blocks(a, b, b, -a);
}
LieElement m_minus(const M2& a) {
  GQ pi_(Rat(0), Rat(1));
  M2 b = a * pi_;
  return Mat4<GQ>::from_blocks(a, b, b, -a);
}

bool is_zero(const LieElement& x) {
  for (const auto& v : x.e)
    if (!v.is_zero()) return false;
  return true;
}

// y = lambda * x for some scalar; returns lambda, throws when not proportional
GQ proportionality(const LieElement& x, const LieElement& y) {
  GQ lambda;
  bool found = false;
  for (int i = 0; i < 16; ++i) {
    if (!x.e[i].is_zero()) {
      lambda = y.e[i] / x.e[i];
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("proportionality: zero reference element");
  for (int i = 0; i < 16; ++i)
    if (!(y.e[i] == x.e[i] * lambda))
      throw std::logic_error("proportionality: elements are not proportional");
  return lambda;
}

GQ leading_entry(const LieElement& x) {
  for (const auto& v : x.e)
    if (!v.is_zero()) return v;
  throw std::logic_error("leading_entry: zero element");
}

LieElement scale(const LieElement& x, const GQ& s) {
  return map_mat4(x, [&](const GQ& v) { return v * s; });
}

}  // namespace

bool in_sp4(const LieElement& x) {
  M2 a = x.a(), b = x.b(), c = x.c(), d = x.d();
  return is_symmetric(b) && is_symmetric(c) && d == -(a.transposed());
}

LieElement bracket(const LieElement& x, const LieElement& y) {
  return x * y - y * x;
}

LieElement cartan_involution(const LieElement& x) { return -(x.transposed()); }

bool is_compact_part(const LieElement& x) { return cartan_involution(x) == x; }
bool is_noncompact_part(const LieElement& x) { return cartan_involution(x) == -x; }

const std::array<const char*, BasisTable::kSize>& BasisTable::names() {
  static const std::array<const char*, kSize> kNames = {
      "h_c", "h_k", "e_k", "f_k", "h_m+", "e_m+", "f_m+", "h_m-", "e_m-", "f_m-"};
  return kNames;
}

int BasisTable::index(std::string_view name) {
  const auto& ns = names();
  for (int i = 0; i < kSize; ++i)
    if (name == ns[i]) return i;
  throw std::invalid_argument("BasisTable: unknown element name");
}

std::array<GaussQ, BasisTable::kSize> BasisTable::coordinates(const LieElement& x) const {
  // Solve the 16 x 10 linear system over Q(i) by Gaussian elimination.
  constexpr int n = kSize;
  std::array<std::array<GQ, n + 1>, 16> rows{};
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < n; ++c) rows[r][c] = elems_[c].e[r];
    rows[r][n] = x.e[r];
  }
  int rank = 0;
  std::array<int, n> pivot_col{};
  for (int col = 0; col < n && rank < 16; ++col) {
    int p = -1;
    for (int r = rank; r < 16; ++r)
      if (!rows[r][col].is_zero()) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(rows[rank], rows[p]);
    GQ inv = GQ(1) / rows[rank][col];
    for (int c = col; c <= n; ++c) rows[rank][c] = rows[rank][c] * inv;
    for (int r = 0; r < 16; ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      GQ f = rows[r][col];
      for (int c = col; c <= n; ++c) rows[r][c] = rows[r][c] - f * rows[rank][c];
    }
    pivot_col[rank] = col;
    ++rank;
  }
  for (int r = rank; r < 16; ++r)
    if (!rows[r][n].is_zero())
      throw std::domain_error("BasisTable::coordinates: element is not in sp4 span");
  std::array<GQ, n> out{};
  for (int r = 0; r < rank; ++r) out[pivot_col[r]] = rows[r][n];
  return out;
}

BasisTable construct_basis() {
  BasisTable t;
  M2 I2 = M2::identity();
  M2 H = M2::diag(GQ(1), GQ(-1));
  M2 E12{GQ(0), GQ(1), GQ(0), GQ(0)};
  M2 E21{GQ(0), GQ(0), GQ(1), GQ(0)};

  LieElement h_c = from_gl2(I2);
  LieElement h_k = from_gl2(H);
  LieElement e_k = from_gl2(E12);
  LieElement f_k = from_gl2(E21);

  // simultaneous eigenvector search on the two ad(h_c) eigenspaces
  auto pick_triple = [&](auto make, int hc_expect) {
    std::array<M2, 3> dirs = {M2{GQ(1), GQ(0), GQ(0), GQ(0)},
                              M2{GQ(0), GQ(1), GQ(1), GQ(0)},
                              M2{GQ(0), GQ(0), GQ(0), GQ(1)}};
    LieElement e_dir, h_dir, f_dir;
    bool have_e = false, have_h = false, have_f = false;
    for (const auto& a : dirs) {
      LieElement x = make(a);
      GQ mu_c = proportionality(x, bracket(h_c, x));
      if (!(mu_c == GQ(hc_expect)))
        throw std::logic_error("construct_basis: ad(h_c) eigenvalue mismatch");
      GQ mu_k;
      LieElement bx = bracket(h_k, x);
      if (is_zero(bx))
        mu_k = GQ(0);
      else
        mu_k = proportionality(x, bx);
      if (mu_k == GQ(2)) {
        e_dir = x;
        have_e = true;
      } else if (mu_k == GQ(0)) {
        h_dir = x;
        have_h = true;
      } else if (mu_k == GQ(-2)) {
        f_dir = x;
        have_f = true;
      } else {
        throw std::logic_error("construct_basis: unexpected ad(h_k) eigenvalue");
      }
    }
    if (!(have_e && have_h && have_f))
      throw std::logic_error("construct_basis: eigen-decomposition incomplete");
    (void)f_dir;
    // leading entry of the e-element normalized to 1
    LieElement e_el = scale(e_dir, GQ(1) / leading_entry(e_dir));
    if (!is_zero(bracket(e_k, e_el)))
      throw std::logic_error("construct_basis: e-element is not a highest weight vector");
    // [e_k, h_m] = -2 e_m fixes the h-element
    GQ mu = proportionality(e_el, bracket(e_k, h_dir));
    LieElement h_el = scale(h_dir, GQ(-2) / mu);
    // [f_k, h_m] = -2 f_m fixes the f-element
    LieElement f_el = scale(bracket(f_k, h_el), GQ(Rat(-1, 2)));
    return std::array<LieElement, 3>{h_el, e_el, f_el};
  };

  auto plus = pick_triple([](const M2& a) { return m_plus(a); }, 2);
  auto minus = pick_triple([](const M2& a) { return m_minus(a); }, -2);

  t.elems_ = {h_c, h_k, e_k, f_k, plus[0], plus[1], plus[2], minus[0], minus[1], minus[2]};

  for (const auto& e : t.elems_)
    if (!in_sp4(e)) throw std::logic_error("construct_basis: element leaves sp4");

  for (int i = 0; i < BasisTable::kSize; ++i)
    for (int j = 0; j < BasisTable::kSize; ++j)
      t.table_[i][j] = t.coordinates(bracket(t.elems_[i], t.elems_[j]));

  return t;
}

}  // namespace siegel
