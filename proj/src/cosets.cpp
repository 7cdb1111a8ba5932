#include "siegel/cosets.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace siegel {

namespace {

using I = std::int64_t;
using Row4 = std::array<I, 4>;
using M24 = std::array<Row4, 2>;

I igcd(I a, I b) { return std::gcd(a, b); }

// extended gcd: returns g, x, y with x a + y b = g >= 0
std::array<I, 3> egcd(I a, I b) {
  if (b == 0) {
    if (a < 0) return {-a, -1, 0};
    return {a, 1, 0};
  }
  auto [g, x, y] = egcd(b, a % b);
  return {g, y, x - (a / b) * y};
}

I floor_div(I a, I b) {
  I q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

M24 to_m24(const IMat2& c, const IMat2& d) {
  return {Row4{c(0, 0), c(0, 1), d(0, 0), d(0, 1)},
          Row4{c(1, 0), c(1, 1), d(1, 0), d(1, 1)}};
}

M24 hnf_2x4(M24 m) {
  int j1 = -1;
  for (int j = 0; j < 4 && j1 < 0; ++j)
    if (m[0][j] != 0 || m[1][j] != 0) j1 = j;
  if (j1 < 0) throw std::logic_error("hnf_2x4: zero matrix");
  {
    I a = m[0][j1], b = m[1][j1];
    auto [g, x, y] = egcd(a, b);
    if (g != 0) {
      Row4 r0, r1;
      for (int k = 0; k < 4; ++k) {
        r0[k] = x * m[0][k] + y * m[1][k];
        r1[k] = -(b / g) * m[0][k] + (a / g) * m[1][k];
      }
      m = {r0, r1};
    }
    if (m[0][j1] < 0)
      for (auto& v : m[0]) v = -v;
  }
  int j2 = -1;
  for (int j = j1 + 1; j < 4 && j2 < 0; ++j)
    if (m[1][j] != 0) j2 = j;
  if (j2 >= 0) {
    if (m[1][j2] < 0)
      for (auto& v : m[1]) v = -v;
    I q = floor_div(m[0][j2], m[1][j2]);
    for (int k = 0; k < 4; ++k) m[0][k] -= q * m[1][k];
  }
  return m;
}

// Smith-style solve: find integer X (2x4) with X W = I2 for the 4x2 matrix
// W = (d^T; -c^T). Exists whenever the pair is coprime.
struct LeftInverse {
  std::array<std::array<I, 4>, 2> x;
};

LeftInverse left_inverse_4x2(const std::array<std::array<I, 2>, 4>& w) {
  // Work with A := W^T (2x4) and solve A x_j = e_j; row j of X is x_j.
  // Smith reduction U A Q = diag(s1, s2 | 0) with s1 = s2 = 1 for coprime
  // pairs, then x_j = Q (U e_j ; 0).
  std::array<std::array<I, 4>, 2> a{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = w[j][i];

  std::array<std::array<I, 2>, 2> u = {{{1, 0}, {0, 1}}};
  std::array<std::array<I, 4>, 4> q{};
  for (int i = 0; i < 4; ++i) q[i][i] = 1;

  auto col_swap = [&](int c1, int c2) {
    for (int i = 0; i < 2; ++i) std::swap(a[i][c1], a[i][c2]);
    for (int i = 0; i < 4; ++i) std::swap(q[i][c1], q[i][c2]);
  };
  auto col_addmul = [&](int dst, int src, I f) {
    for (int i = 0; i < 2; ++i) a[i][dst] += f * a[i][src];
    for (int i = 0; i < 4; ++i) q[i][dst] += f * q[i][src];
  };
  auto col_neg = [&](int c) {
    for (int i = 0; i < 2; ++i) a[i][c] = -a[i][c];
    for (int i = 0; i < 4; ++i) q[i][c] = -q[i][c];
  };
  auto row_swap = [&]() {
    std::swap(a[0], a[1]);
    std::swap(u[0], u[1]);
  };
  auto row_addmul = [&](int dst, int src, I f) {
    for (int j = 0; j < 4; ++j) a[dst][j] += f * a[src][j];
    for (int j = 0; j < 2; ++j) u[dst][j] += f * u[src][j];
  };

  for (int r = 0; r < 2; ++r) {
    for (;;) {
      int pi = -1, pj = -1;
      for (int i = r; i < 2; ++i)
        for (int j = r; j < 4; ++j)
          if (a[i][j] != 0 &&
              (pi < 0 || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) throw std::logic_error("left_inverse_4x2: rank deficient");
      if (pi != r) row_swap();
      if (pj != r) col_swap(r, pj);
      if (a[r][r] < 0) col_neg(r);
      bool clean = true;
      for (int j = r + 1; j < 4; ++j)
        if (a[r][j] != 0) {
          col_addmul(j, r, -floor_div(a[r][j], a[r][r]));
          if (a[r][j] != 0) clean = false;
        }
      if (r == 0 && a[1][0] != 0) {
        row_addmul(1, 0, -floor_div(a[1][0], a[0][0]));
        if (a[1][0] != 0) clean = false;
      }
      if (clean && r == 0) {
        // pivot must divide the interior before moving on
        for (int j = 1; j < 4 && clean; ++j)
          if (a[1][j] % a[0][0] != 0) {
            col_addmul(0, j, 1);
            clean = false;
          }
      }
      if (clean) break;
    }
  }
  if (a[0][0] != 1 || a[1][1] != 1)
    throw std::logic_error("left_inverse_4x2: pair is not coprime");

  LeftInverse res{};
  for (int j = 0; j < 2; ++j) {
    I v0 = u[0][j];
    I v1 = u[1][j];
    for (int i = 0; i < 4; ++i) res.x[j][i] = q[i][0] * v0 + q[i][1] * v1;
  }
  return res;
}

}  // namespace

bool is_symmetric_pair(const IMat2& c, const IMat2& d) {
  // (c d^T)_{01} == (c d^T)_{10}
  I m01 = c(0, 0) * d(1, 0) + c(0, 1) * d(1, 1);
  I m10 = c(1, 0) * d(0, 0) + c(1, 1) * d(0, 1);
  return m01 == m10;
}

bool is_coprime_pair(const IMat2& c, const IMat2& d) {
  M24 m = to_m24(c, d);
  I g = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      g = igcd(g, m[0][i] * m[1][j] - m[0][j] * m[1][i]);
  return std::llabs(g) == 1;
}

std::array<std::array<std::int64_t, 4>, 2> pair_canonical_form(const IMat2& c,
                                                               const IMat2& d) {
  M24 h = hnf_2x4(to_m24(c, d));
  return {h[0], h[1]};
}

Mat4<std::int64_t> complete_to_symplectic(const IMat2& c, const IMat2& d) {
  if (!is_symmetric_pair(c, d) || !is_coprime_pair(c, d))
    throw std::domain_error("complete_to_symplectic: not a symmetric coprime pair");

  // particular solution of a d^T - b c^T = I
  std::array<std::array<I, 2>, 4> w{};  // W = (d^T; -c^T)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      w[i][j] = d(j, i);
      w[i + 2][j] = -c(j, i);
    }
  LeftInverse li = left_inverse_4x2(w);
  IMat2 a{li.x[0][0], li.x[0][1], li.x[1][0], li.x[1][1]};
  IMat2 b{li.x[0][2], li.x[0][3], li.x[1][2], li.x[1][3]};

  // fix the antisymmetric defect n of a b^T by shifting (a, b) += s (c, d)
  auto defect = [&](const IMat2& aa, const IMat2& bb) {
    // (a b^T)_{01} - (a b^T)_{10}
    I m01 = aa(0, 0) * bb(1, 0) + aa(0, 1) * bb(1, 1);
    I m10 = aa(1, 0) * bb(0, 0) + aa(1, 1) * bb(0, 1);
    return m01 - m10;
  };
  I n0 = defect(a, b);
  if (n0 != 0) {
    // the defect is affine-linear in s; sample the four unit directions
    std::array<I, 4> lam{};
    std::array<IMat2, 4> units = {IMat2{1, 0, 0, 0}, IMat2{0, 1, 0, 0},
                                  IMat2{0, 0, 1, 0}, IMat2{0, 0, 0, 1}};
    bool solved = false;
    for (int i = 0; i < 4 && !solved; ++i) {
      lam[i] = defect(a + units[i] * c, b + units[i] * d) - n0;
      if (lam[i] != 0 && n0 % lam[i] == 0) {
        I s = -n0 / lam[i];
        a = a + units[i] * I(s) * c;
        b = b + units[i] * I(s) * d;
        solved = true;
      }
    }
    if (!solved) {
      // combine two directions via extended gcd
      for (int i = 0; i < 4 && !solved; ++i)
        for (int j = i + 1; j < 4 && !solved; ++j) {
          auto [g, xi, xj] = egcd(lam[i], lam[j]);
          if (g != 0 && n0 % g == 0) {
            I f = -n0 / g;
            IMat2 s = units[i] * (xi * f) + units[j] * (xj * f);
            a = a + s * c;
            b = b + s * d;
            solved = true;
          }
        }
    }
    if (!solved || defect(a, b) != 0)
      throw std::logic_error("complete_to_symplectic: symmetrization failed");
  }

  Mat4<I> g = Mat4<I>::from_blocks(a, b, c, d);
  // verify g J g^T = J (integer arithmetic)
  Mat4<I> J = Mat4<I>::symplectic_form();
  if (!(g * J * g.transposed() == J))
    throw std::logic_error("complete_to_symplectic: completion is not symplectic");
  return g;
}

std::vector<CosetRep> enumerate_cosets(int height_bound) {
  if (height_bound < 0) throw std::domain_error("enumerate_cosets: negative height");
  std::map<M24, bool> seen;

  M24 id_form = pair_canonical_form(IMat2::zero(), IMat2::identity());
  seen[id_form] = true;

  const I B = height_bound;
  std::array<I, 8> e{};
  if (B > 0) {
    // odometer over the 8 entries of (c, d)
    for (auto& v : e) v = -B;
    while (true) {
      IMat2 c{e[0], e[1], e[2], e[3]}, d{e[4], e[5], e[6], e[7]};
      if (is_symmetric_pair(c, d) && is_coprime_pair(c, d))
        seen.emplace(pair_canonical_form(c, d), true);
      int i = 7;
      while (i >= 0 && e[i] == B) e[i--] = -B;
      if (i < 0) break;
      ++e[i];
    }
  }

  std::vector<CosetRep> out;
  out.reserve(seen.size());
  for (const auto& [m, _] : seen) {
    CosetRep r;
    r.c = IMat2{m[0][0], m[0][1], m[1][0], m[1][1]};
    r.d = IMat2{m[0][2], m[0][3], m[1][2], m[1][3]};
    r.witness = complete_to_symplectic(r.c, r.d);
    out.push_back(r);
  }
  return out;  // std::map iteration already sorted by canonical form
}

std::string cosets_to_csv(const std::vector<CosetRep>& reps) {
  std::string s = "c11,c12,c21,c22,d11,d12,d21,d22\n";
  for (const auto& r : reps) {
    s += std::to_string(r.c(0, 0)) + "," + std::to_string(r.c(0, 1)) + "," +
         std::to_string(r.c(1, 0)) + "," + std::to_string(r.c(1, 1)) + "," +
         std::to_string(r.d(0, 0)) + "," + std::to_string(r.d(0, 1)) + "," +
         std::to_string(r.d(1, 0)) + "," + std::to_string(r.d(1, 1)) + "\n";
  }
  return s;
}

}  // namespace siegel
