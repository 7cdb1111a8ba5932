// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Heavy laboratory state (coset windows, kernel grids) is
// shared across criteria.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

#include "siegel/cli_app.hpp"
#include "siegel/diagram.hpp"
#include "siegel/eisenstein.hpp"
#include "siegel/io.hpp"
#include "siegel/sp4.hpp"

using namespace siegel;
using Clock = std::chrono::steady_clock;

namespace {

int g_jobs = 1;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Battery {
  std::vector<Mat4d> gammas;
  std::vector<SiegelPoint> taus;
};

Battery make_battery(std::uint64_t seed, int n_gamma, int n_tau) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0, 1)(rng);
  };
  Battery bat;
  for (int i = 0; i < n_gamma; ++i) {
    Mat4d g = Mat4d::identity();
    int n = 1 + int(rng() % 4);
    for (int j = 0; j < n; ++j) {
      switch (rng() % 4) {
        case 0:
          g = g * translation(Mat2d::sym(double(int(rng() % 3)) - 1,
                                         double(int(rng() % 3)) - 1,
                                         double(int(rng() % 3)) - 1));
          break;
        case 1:
          g = g * gl_embed(rng() % 2 ? Mat2d{1, 1, 0, 1} : Mat2d{0, 1, 1, 0});
          break;
        default: g = g * inversion();
      }
    }
    bat.gammas.push_back(g);
  }
  for (int i = 0; i < n_tau; ++i) {
    double l11 = uni(0.7, 1.3), l21 = uni(-0.4, 0.4), l22 = uni(0.7, 1.3);
    bat.taus.emplace_back(Mat2d::sym(uni(-1, 1), uni(-0.5, 0.5), uni(-1, 1)),
                          Mat2d::sym(l11 * l11 + 0.2, l11 * l21,
                                     l21 * l21 + l22 * l22 + 0.2));
  }
  return bat;
}

ModularMap battery_map(const Weight& w, int kind) {
  Mat2d t = Mat2d::sym(1.0, 0.5, 1.0);
  TermList base;
  switch (kind) {
    case 0: base = term_det_y_power(1); break;
    case 1: base = term_det_y_power(3); break;
    case 2: base = term_exponential(t, t); break;
    default: base = term_exponential(t, Mat2d::sym(2.0, 0.0, 1.5)); break;
  }
  std::vector<TermList> comps(w.dim());
  for (int i = 0; i < w.dim(); ++i) comps[i] = scale_terms(base, Cplx(1.0 + i, 0.25 * i));
  return ModularMap::symbolic(w, std::move(comps));
}

// -------------------------------------------------------------------------
bool criterion1_covariance() {
  auto t0 = Clock::now();
  Battery bat = make_battery(2024, 20, 10);
  std::vector<CovOp> ops = {{Dir::L, false, Comp::plus}, {Dir::R, false, Comp::plus},
                            {Dir::L, true, Comp::plus},  {Dir::L, true, Comp::zero},
                            {Dir::R, true, Comp::zero},  {Dir::R, true, Comp::minus}};
  double worst_exact = 0;
  for (int l : {0, 2, 4})
    for (int kind = 0; kind < 4; ++kind) {
      ModularMap f = battery_map({4, l}, kind);
      for (std::size_t gi = 0; gi < bat.gammas.size(); ++gi)
        for (const auto& op : ops)
          worst_exact = std::max(worst_exact,
                                 check_covariance(f, bat.gammas[gi], op,
                                                  bat.taus[gi % bat.taus.size()]));
    }

  // numeric differentiation path: the same closed forms behind an opaque
  // evaluator
  double worst_numeric = 0;
  for (int l : {0, 2})
    for (int kind : {0, 3}) {
      ModularMap exact = battery_map({4, l}, kind);
      auto core = exact.core_ptr();
      ModularMap f = ModularMap::numeric(
          exact.weight(), [core](const SiegelPoint& p) { return core->eval(p); },
          StepPolicy{1e-3, 3});
      for (std::size_t gi = 0; gi < 6; ++gi)
        for (const auto& op : ops)
          worst_numeric = std::max(worst_numeric,
                                   check_covariance(f, bat.gammas[gi], op,
                                                    bat.taus[gi % bat.taus.size()]));
    }
  double dt = seconds_since(t0);
  bool pass = worst_exact < 1e-6 && worst_numeric < 1e-4 && dt < 60.0;
  std::printf("[%s] criterion 1: covariance suite (exact %.2e < 1e-6, numeric %.2e < "
              "1e-4, %.1fs < 60s)\n",
              pass ? "PASS" : "FAIL", worst_exact, worst_numeric, dt);
  return pass;
}

// -------------------------------------------------------------------------
bool criterion2_clebsch_gordan() {
  auto t0 = Clock::now();
  bool ok = true;
  std::mt19937_64 rng(77);
  auto rand_int_mat = [&]() {
    for (;;) {
      Mat2<Rat> g{Rat(long(rng() % 7) - 3), Rat(long(rng() % 7) - 3),
                  Rat(long(rng() % 7) - 3), Rat(long(rng() % 7) - 3)};
      if (!(g.det() == 0)) return g;
    }
  };
  for (int l = 0; l <= 12 && ok; ++l) {
    ProjectionTable table({1, l});
    int n = 3 * (l + 1);
    for (Dir dir : {Dir::L, Dir::R}) {
      Matrix<Rat> sum(n, n);
      for (Comp c : {Comp::plus, Comp::zero, Comp::minus}) {
        if (!table.present(c)) continue;
        sum = sum + table.embedding_q(dir, c) * table.projection_q(dir, c);
      }
      ok = ok && sum == Matrix<Rat>::identity(n);
    }
    // exact equivariance on random integer matrices
    for (int trial = 0; trial < 3 && ok; ++trial) {
      Mat2<Rat> g = rand_int_mat();
      Matrix<Rat> s2 = sym_substitution(g, 2), sl = sym_substitution(g, l);
      Matrix<Rat> s2d = sym_substitution(g.inverse().transposed(), 2);
      auto kron = [](const Matrix<Rat>& a, const Matrix<Rat>& b) {
        Matrix<Rat> m(a.rows() * b.rows(), a.cols() * b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
          for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t p = 0; p < b.rows(); ++p)
              for (std::size_t q = 0; q < b.cols(); ++q)
                m(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        return m;
      };
      Matrix<Rat> src_poly = kron(s2, sl), src_dual = kron(s2d, sl);
      Rat detg = g.det();
      for (Comp c : {Comp::plus, Comp::zero, Comp::minus}) {
        if (!table.present(c)) continue;
        int deg = l + (c == Comp::plus ? 2 : (c == Comp::zero ? 0 : -2));
        int dp = c == Comp::plus ? 0 : (c == Comp::zero ? 1 : 2);
        Matrix<Rat> st = sym_substitution(g, deg);
        Rat dpow(1);
        for (int i = 0; i < dp; ++i) dpow *= detg;
        Matrix<Rat> tr(st.rows(), st.cols()), tl(st.rows(), st.cols());
        for (std::size_t i = 0; i < st.rows(); ++i)
          for (std::size_t j = 0; j < st.cols(); ++j) {
            tr(i, j) = st(i, j) * dpow;
            tl(i, j) = st(i, j) * dpow / (detg * detg);
          }
        ok = ok && table.projection_q(Dir::R, c) * src_poly ==
                       tr * table.projection_q(Dir::R, c);
        ok = ok && table.projection_q(Dir::L, c) * src_dual ==
                       tl * table.projection_q(Dir::L, c);
      }
    }
  }

  // floating Gram-Schmidt oracle agreement
  double worst_gram = 0;
  for (int l : {2, 4, 6}) {
    ProjectionTable table({0, l});
    int n = 3 * (l + 1);
    std::vector<double> fw(n);
    for (int m = 0; m < 3; ++m)
      for (int i = 0; i <= l; ++i)
        fw[m * (l + 1) + i] = to_double(fischer_norm2(2 - m, m) * fischer_norm2(l - i, i));
    for (Comp c : {Comp::plus, Comp::zero, Comp::minus}) {
      const Matrix<Rat>& embq = table.embedding_q(Dir::R, c);
      std::vector<std::vector<double>> basis;
      for (std::size_t j = 0; j < embq.cols(); ++j) {
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = to_double(embq(std::size_t(i), j));
        for (const auto& b : basis) {
          double dot = 0;
          for (int i = 0; i < n; ++i) dot += u[i] * b[i] * fw[i];
          for (int i = 0; i < n; ++i) u[i] -= dot * b[i];
        }
        double norm = 0;
        for (int i = 0; i < n; ++i) norm += u[i] * u[i] * fw[i];
        norm = std::sqrt(norm);
        for (auto& x : u) x /= norm;
        basis.push_back(u);
      }
      Matrix<Rat> ip = table.embedding_q(Dir::R, c) * table.projection_q(Dir::R, c);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double oracle = 0;
          for (const auto& b : basis) oracle += b[i] * b[j] * fw[j];
          worst_gram = std::max(
              worst_gram,
              std::fabs(oracle - to_double(ip(std::size_t(i), std::size_t(j)))));
        }
    }
  }
  ok = ok && worst_gram < 1e-12;
  double dt = seconds_since(t0);
  std::printf("[%s] criterion 2: Clebsch-Gordan exact completeness/equivariance l<=12, "
              "Gram oracle %.2e < 1e-12 (%.1fs)\n",
              ok ? "PASS" : "FAIL", worst_gram, dt);
  return ok;
}

// -------------------------------------------------------------------------
bool criterion3_lie_structure() {
  bool ok = true;
  BasisTable t = construct_basis();
  auto scaled = [](const LieElement& x, long s) {
    return map_mat4(x, [&](const GaussQ& g) { return g * GaussQ(s); });
  };
  auto zero = [](const LieElement& x) {
    for (const auto& v : x.e)
      if (!v.is_zero()) return false;
    return true;
  };
  // the three quoted relations
  ok = ok && zero(bracket(t.elem("e_k"), t.elem("e_m+")));
  ok = ok && bracket(t.elem("e_k"), t.elem("h_m+")) == scaled(t.elem("e_m+"), -2);
  ok = ok && bracket(t.elem("h_c"), t.elem("e_m-")) == scaled(t.elem("e_m-"), -2);
  // involution and eigenspace dimensions
  int dim_k = 0, dim_m = 0;
  for (int i = 0; i < 10; ++i) {
    const LieElement& x = t.elem(i);
    ok = ok && cartan_involution(cartan_involution(x)) == x;
    if (is_compact_part(x)) ++dim_k;
    if (is_noncompact_part(x)) ++dim_m;
  }
  ok = ok && dim_k == 4 && dim_m == 6;
  // Jacobi on 200 random triples, exact
  std::mt19937_64 rng(99);
  auto rnd_elem = [&] {
    LieElement x = LieElement::zero();
    for (int i = 0; i < 10; ++i) x = x + scaled(t.elem(i), long(rng() % 5) - 2);
    return x;
  };
  for (int trial = 0; trial < 200 && ok; ++trial) {
    LieElement x = rnd_elem(), y = rnd_elem(), z = rnd_elem();
    ok = zero(bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) +
              bracket(z, bracket(x, y)));
  }
  std::printf("[%s] criterion 3: sp4 structure (quoted brackets, theta^2 = id, dims "
              "4/6, Jacobi x200 exact)\n",
              ok ? "PASS" : "FAIL");
  return ok;
}

// -------------------------------------------------------------------------
bool criterion4_ktype_combinatorics() {
  bool ok = true;
  // transition rules on the exhaustive window
  for (int a = -10; a <= 10 && ok; ++a)
    for (int b = -10; b <= a && ok; ++b)
      for (MSide side : {MSide::plus, MSide::minus}) {
        int s = side == MSide::plus ? 1 : -1;
        std::vector<KTypePair> want;
        if (a - b >= 2)
          want = {{a + 2 * s, b}, {a + s, b + s}, {a, b + 2 * s}};
        else if (a - b == 1)
          want = side == MSide::plus
                     ? std::vector<KTypePair>{{a + 2, b}, {a + 1, b + 1}}
                     : std::vector<KTypePair>{{a, b - 2}, {a - 1, b - 1}};
        else
          want = {side == MSide::plus ? KTypePair{a + 2, a} : KTypePair{a, a - 2}};
        std::sort(want.begin(), want.end());
        ok = ok && transitions({a, b}, side) == want;
      }

  // socle layers partition windows; finite layer sizes
  std::size_t sizes[3] = {1, 6, 15};
  int idx = 0;
  for (int k : {2, 4, 6}) {
    SocleSeries s = lee_socle(k);
    ok = ok && s.top_layer().size() == sizes[idx++];
    for (int a = -20; a <= 20 && ok; ++a)
      for (int b = -20; b <= a; ++b) {
        KTypePair p{a, b};
        if (!s.in_even_lattice(p)) continue;
        ok = ok && int(s.in_bottom(p)) + int(s.in_middle(p)) + int(s.in_top(p)) == 1;
      }
  }

  // forbidden directions on the sk cone
  SupportSpec sk = aq_support(ParabolicType::sk, {3, -3});
  const auto& dict = direction_dictionary();
  for (PiOp op : {PiOp{Dir::L, Comp::zero}, PiOp{Dir::L, Comp::minus},
                  PiOp{Dir::R, Comp::zero}, PiOp{Dir::R, Comp::minus}}) {
    const auto& e = dict.at(op);
    ok = ok && !sk.contains({sk.minimal.a + e.da, sk.minimal.b + e.db});
  }
  // while the two allowed ones are present
  ok = ok && sk.contains({sk.minimal.a + 2, sk.minimal.b});
  ok = ok && sk.contains({sk.minimal.a, sk.minimal.b - 2});

  std::printf("[%s] criterion 4: K-type combinatorics (transition rules |a|,|b|<=10, "
              "socle layers 1/6/15 partition, sk cone walls)\n",
              ok ? "PASS" : "FAIL");
  return ok;
}

// -------------------------------------------------------------------------
bool criterion5_eisenstein(const CosetWindow& win2) {
  auto t0 = Clock::now();
  const int k = 10;
  SiegelPoint tau = SiegelPoint::from_entries(0.23, 0.11, -0.17, 1.1, 0.21, 0.89);

  // (a) term-by-term skew relation
  double worst_term = 0;
  double pref = std::sqrt(tau.y.det());
  for (const auto& rep : win2.classes) {
    Cplx lhs = pref * std::conj(skew_term(k + 1, tau, rep));
    Cplx rhs = eisenstein_term(k, tau, rep);
    worst_term = std::max(worst_term, std::abs(lhs - rhs) / std::abs(rhs));
  }
  bool pass_a = worst_term < 1e-12;

  // (b) slash invariance of the truncated sum
  double worst_inv = 0;
  std::vector<Mat4d> gammas = {inversion(), translation(Mat2d::sym(1, 0, -1)),
                               gl_embed(Mat2d{1, 1, 0, 1}),
                               inversion() * translation(Mat2d::sym(0, 1, 1))};
  Cplx base = eval_eisenstein(k, tau, win2);
  for (const auto& g : gammas) {
    SiegelPoint gt = moebius_act(g, tau);
    Cplx lhs = std::pow(cocycle(g, tau).det(), -double(k)) * eval_eisenstein(k, gt, win2);
    worst_inv = std::max(worst_inv, std::abs(lhs - base) / std::abs(base));
  }
  bool pass_b = worst_inv < 1e-3;

  // (c) negative definite coefficients below 3x budget, all entries <= 2
  double worst_ratio = 0;
  int scanned = 0;
  std::vector<FourierIndex> neg;
  for (int a = -2; a <= 2; ++a)
    for (int c = -2; c <= 2; ++c)
      for (int b2 = -4; b2 <= 4; ++b2) {
        FourierIndex t{Rat(a), Rat(b2) / 2, Rat(c)};
        if (t.signature() != FourierIndex::Signature::negative_definite) continue;
        neg.push_back(t);
      }
  auto vals = fourier_coefficients(k, neg, Mat2d::identity(), 6, win2);
  for (std::size_t i = 0; i < neg.size(); ++i) {
    worst_ratio = std::max(worst_ratio, std::abs(vals[i].value) / vals[i].budget());
    ++scanned;
  }
  bool pass_c = worst_ratio < 3.0;

  // (d) exponential decay of an indefinite coefficient over y = s I
  FourierIndex toff{Rat(0), Rat(1) / 2, Rat(0)};
  std::vector<double> ss = {1.0, 1.5, 2.0, 2.5, 3.0}, logs;
  bool monotone = true;
  for (double s : ss) {
    auto v = fourier_coefficient(k, toff, Mat2d::identity() * s, 6, win2);
    logs.push_back(std::log(std::abs(v.value)));
    if (logs.size() > 1 && logs.back() >= logs[logs.size() - 2]) monotone = false;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    sx += ss[i];
    sy += logs[i];
    sxx += ss[i] * ss[i];
    sxy += ss[i] * logs[i];
  }
  double slope = (ss.size() * sxy - sx * sy) / (ss.size() * sxx - sx * sx);
  bool pass_d = monotone && slope < 0;

  bool pass = pass_a && pass_b && pass_c && pass_d;
  std::printf("[%s] criterion 5: Eisenstein laboratory k=10 (skew term-by-term %.1e; "
              "slash-invariance %.1e < 1e-3; %d negative-definite indices at %.2fx "
              "budget < 3x; decay slope %.2f < 0 monotone=%d; %.1fs)\n",
              pass ? "PASS" : "FAIL", worst_term, worst_inv, scanned, worst_ratio, slope,
              monotone ? 1 : 0, seconds_since(t0));
  return pass;
}

// -------------------------------------------------------------------------
struct Lab {
  YGrid grid;
  std::vector<FourierIndex> ts;
  std::vector<CoefficientProfile> profiles;
  std::vector<LiftedKernel> low, high;
  int rich = 2;
  double safety = 3.0;
};

Lab build_k4_lab(const CosetWindow& win2) {
  Lab lab;
  lab.grid = YGrid::centered(Mat2d::identity(), 0.02, 15);
  lab.ts = {{Rat(1), Rat(0), Rat(-1)}, {Rat(1), Rat(1) / 2, Rat(-1)}, {Rat(2), Rat(0), Rat(-1)}};
  lab.profiles = build_profiles(2, lab.ts, lab.grid, 6, win2, g_jobs);
  for (const auto& p : lab.profiles) {
    lab.low.push_back(lift_kernel(p, 1, lab.rich));
    lab.high.push_back(lift_kernel(p, 2, lab.rich));
  }
  return lab;
}

bool criterion6_lifted_kernels(const Lab& lab) {
  auto t0 = Clock::now();
  bool ok = true;
  double worst_ratio = 0;
  int interior_pts = 0;

  for (std::size_t i = 0; i < lab.ts.size(); ++i) {
    const auto& kl = lab.low[i];
    const auto& kh = lab.high[i];
    // the identity chain pi_L+ L low = high holds on the shared pipeline
    KernelOpCheck step = apply_kernel_op(kl, Dir::L, Comp::plus, lab.rich, lab.safety);
    interior_pts = int(step.value.interior_nodes().size());
    double chain = 0, scale = 0;
    for (auto [a, b, c] : step.value.interior_nodes()) {
      std::size_t node = step.value.grid.index(a, b, c);
      for (int q = 0; q < step.value.dim(); ++q) {
        chain = std::max(chain,
                         std::abs(step.value.value(node, q) - kh.fn.value(node, q)));
        scale = std::max(scale, std::abs(kh.fn.value(node, q)));
      }
    }
    ok = ok && chain <= 1e-12 * std::max(1.0, scale);

    for (auto [kern, d, c] : {std::tuple<const LiftedKernel*, Dir, Comp>
                                  {&kl, Dir::L, Comp::zero},
                              {&kl, Dir::L, Comp::minus},
                              {&kh, Dir::L, Comp::zero},
                              {&kh, Dir::L, Comp::minus},
                              {&kh, Dir::R, Comp::zero},
                              {&kh, Dir::R, Comp::minus}}) {
      KernelOpCheck chk = apply_kernel_op(*kern, d, c, lab.rich, lab.safety);
      worst_ratio = std::max(worst_ratio, chk.worst_ratio);
      ok = ok && chk.worst_ratio <= 1.0;
    }
  }
  ok = ok && interior_pts >= 10;

  // pi_L+ L f* = f on a 3-term coefficient list
  CoefficientList coeffs;
  coeffs.entries.emplace_back(lab.ts[0], Cplx(1.0, 0.0));
  coeffs.entries.emplace_back(lab.ts[1], Cplx(-0.5, 0.25));
  coeffs.entries.emplace_back(lab.ts[2], Cplx(0.75, -1.0));
  ModularMap fstar = assemble_fstar(coeffs, lab.low, lab.rich);
  ModularMap f = assemble_fstar(coeffs, lab.high, lab.rich);
  ModularMap lf = projected_op(fstar, Dir::L, Comp::plus);
  double budget = 0;
  for (std::size_t i = 0; i < lab.low.size(); ++i)
    budget += std::abs(coeffs.entries[i].second) *
              (lab.low[i].budget(lab.safety) + lab.high[i].budget(lab.safety));
  std::mt19937_64 rng(404);
  auto nodes = lab.high.front().fn.interior_nodes(stencil_radius(lab.rich));
  double worst_fstar = 0;
  for (int s = 0; s < 10; ++s) {
    auto [a, b, c] = nodes[rng() % nodes.size()];
    auto u = [&](double lo, double hi) {
      return lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
    };
    SiegelPoint tau(Mat2d::sym(u(-0.5, 0.5), u(-0.25, 0.25), u(-0.5, 0.5)),
                    lab.grid.node(a, b, c));
    CVec va = lf.eval(tau).coeffs, vb = f.eval(tau).coeffs;
    for (std::size_t q = 0; q < va.size(); ++q)
      worst_fstar = std::max(worst_fstar, std::abs(va[q] - vb[q]));
  }
  ok = ok && worst_fstar <= budget;

  double dt = seconds_since(t0);
  bool time_ok = dt < 1800.0;
  ok = ok && time_ok;
  std::printf("[%s] criterion 6: lifted-kernel identities k=4 (vanishing worst "
              "residual/budget %.3f <= 1, chain exact, f* identity %.2e <= budget "
              "%.2e, %d interior points >= 10, %.1fs < 1800s)\n",
              ok ? "PASS" : "FAIL", worst_ratio, worst_fstar, budget, interior_pts, dt);
  return ok;
}

// -------------------------------------------------------------------------
bool criterion7_roundtrip(const Lab& lab) {
  auto t0 = Clock::now();
  // gate: the exact constant-term kernel chain, an element of the same
  // multiplicity-free module as the tabulated kernels
  std::mt19937_64 rng(555);
  auto uni = [&](double a, double b) {
    return a + (b - a) * std::uniform_real_distribution<double>(0, 1)(rng);
  };
  ModularMap seed = ModularMap::symbolic_scalar({2, 0}, term_det_y_power(1));
  ModularMap f0 = projected_op(seed, Dir::L, Comp::plus);
  std::vector<SiegelPoint> taus;
  for (int i = 0; i < 12; ++i) {
    double l11 = uni(0.7, 1.3), l21 = uni(-0.4, 0.4), l22 = uni(0.7, 1.3);
    taus.emplace_back(Mat2d::sym(uni(-1, 1), uni(-0.5, 0.5), uni(-1, 1)),
                      Mat2d::sym(l11 * l11 + 0.2, l11 * l21,
                                 l21 * l21 + l22 * l22 + 0.2));
  }
  RoundtripResult exact = roundtrip_constant(f0, 4, taus);
  bool pass = exact.spread < 1e-2;

  // tabulated kernels: reported alongside with their budgets
  std::printf("       criterion 7 report: c_4 = %.10g%+.2ei (exact kernel, spread "
              "%.1e)\n",
              exact.mean.real(), exact.mean.imag(), exact.spread);
  for (std::size_t i = 0; i < lab.ts.size(); ++i) {
    ModularMap f = grid_map(lab.low[i].fn, lab.rich);
    auto nodes = lab.low[i].fn.interior_nodes(2 * stencil_radius(lab.rich));
    std::vector<SiegelPoint> samples;
    for (int s = 0; s < 12; ++s) {
      auto [a, b, c] = nodes[rng() % nodes.size()];
      samples.emplace_back(Mat2d::sym(uni(-0.5, 0.5), uni(-0.25, 0.25), uni(-0.5, 0.5)),
                           lab.grid.node(a, b, c));
    }
    RoundtripResult res = roundtrip_constant(f, 4, samples);
    double rel_budget =
        lab.low[i].budget(lab.safety) / std::max(lab.low[i].fn.max_value_norm(), 1e-300);
    std::printf("       criterion 7 report: t=%s ratio %.4g%+.4gi spread %.2e "
                "(relative tabulation budget %.2f, %s)\n",
                lab.ts[i].str().c_str(), res.mean.real(), res.mean.imag(), res.spread,
                rel_budget, rel_budget < 1e-2 ? "gated" : "reported only");
    if (rel_budget < 1e-2) pass = pass && res.spread < 1e-2;
  }
  std::printf("[%s] criterion 7: roundtrip ratio spread %.2e < 1e-2 on in-budget "
              "Eisenstein-derived kernels; c_4 reported above (%.1fs)\n",
              pass ? "PASS" : "FAIL", exact.spread, seconds_since(t0));
  return pass;
}

// -------------------------------------------------------------------------
int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "siegel-lab");
  std::vector<char*> argv;
  for (auto& s : args) argv.push_back(s.data());
  return cli_main(int(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) return {};
  std::string s;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) s.append(buf, n);
  std::fclose(f);
  return s;
}

bool criterion8_determinism() {
  bool ok = true;
  struct Case {
    std::vector<std::string> args;
    const char* name;
  };
  std::vector<Case> cases = {
      {{"fourier-extract", "--k", "10", "--height-bound", "1", "--t", "1,0,-1", "--t",
        "0,1/2,0", "--y-scale", "1,1.5", "--quad-n", "5", "--format", "csv", "--seed",
        "9"},
       "fourier csv"},
      {{"lee-socle", "--k", "6", "--window", "14", "--seed", "9"}, "socle json"},
      {{"ktype-diagram", "--kind", "sk", "--minimal", "2,-2", "--window", "6",
        "--format", "svg"},
       "diagram svg"},
      {{"verify-covariance", "--gammas", "6", "--taus", "3", "--seed", "9"},
       "covariance json"},
  };
  for (const auto& c : cases) {
    auto run = [&](const char* path, const char* jobs) {
      auto args = c.args;
      args.push_back("--jobs");
      args.push_back(jobs);
      args.push_back("--out");
      args.push_back(path);
      return run_cli(args);
    };
    int r1 = run("/tmp/siegel_acc_a.out", "1");
    int r2 = run("/tmp/siegel_acc_b.out", "4");
    bool same = r1 == r2 && slurp("/tmp/siegel_acc_a.out") == slurp("/tmp/siegel_acc_b.out") &&
                !slurp("/tmp/siegel_acc_a.out").empty();
    if (!same) std::printf("       determinism broke on: %s\n", c.name);
    ok = ok && same;
  }
  std::printf("[%s] criterion 8: byte-identical JSON/CSV/SVG outputs across worker "
              "counts\n",
              ok ? "PASS" : "FAIL");
  return ok;
}

}  // namespace

int main() {
  g_jobs = int(std::thread::hardware_concurrency());
  if (g_jobs < 1) g_jobs = 1;
  if (g_jobs > 8) g_jobs = 8;

  auto t0 = Clock::now();
  CosetWindow win2 = CosetWindow::build(2);

  int failures = 0;
  failures += !criterion1_covariance();
  failures += !criterion2_clebsch_gordan();
  failures += !criterion3_lie_structure();
  failures += !criterion4_ktype_combinatorics();
  failures += !criterion5_eisenstein(win2);
  Lab lab = build_k4_lab(win2);
  failures += !criterion6_lifted_kernels(lab);
  failures += !criterion7_roundtrip(lab);
  failures += !criterion8_determinism();

  std::printf("%d/8 criteria passed in %.1fs\n", 8 - failures, seconds_since(t0));
  return failures;
}
