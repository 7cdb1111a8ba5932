#include <random>

#include "doctest.h"
#include "siegel/eisenstein.hpp"

using namespace siegel;

namespace {

const SiegelPoint kTau = SiegelPoint::from_entries(0.23, 0.11, -0.17, 1.1, 0.21, 0.89);

const CosetWindow& window0() {
  static CosetWindow w = CosetWindow::build(0);
  return w;
}
const CosetWindow& window1() {
  static CosetWindow w = CosetWindow::build(1);
  return w;
}

}  // namespace

TEST_CASE("series value at height zero is the seed") {
  CHECK(std::abs(eval_eisenstein(10, kTau, window0()) - std::sqrt(kTau.y.det())) < 1e-15);
  CHECK_THROWS_AS(eval_eisenstein(2, kTau, window0()), std::domain_error);
  CHECK_THROWS_AS(eval_eisenstein(7, kTau, window0()), std::domain_error);
}

TEST_CASE("skew companion and the term-by-term relation") {
  // identity coset contributes 1 to the skew sum
  CHECK(std::abs(skew_term(11, kTau, window0().classes[0]) - Cplx(1.0, 0.0)) < 1e-15);

  // det(y)^{1/2} conj(skew term) equals the series term, class by class
  int k = 10;
  double pref = std::sqrt(kTau.y.det());
  for (const auto& rep : window1().classes) {
    Cplx lhs = pref * std::conj(skew_term(k + 1, kTau, rep));
    Cplx rhs = eisenstein_term(k, kTau, rep);
    CHECK(std::abs(lhs - rhs) <= 1e-14 * std::abs(rhs));
  }

  // hence the sums satisfy the relation to rounding
  Cplx sums = pref * std::conj(skew_eisenstein(k + 1, kTau, window1()));
  Cplx direct = eval_eisenstein(k, kTau, window1());
  CHECK(std::abs(sums - direct) < 1e-13 * std::abs(direct));
}

TEST_CASE("fourier extraction basics") {
  CHECK_THROWS_AS(
      fourier_coefficient(10, FourierIndex{Rat(1), Rat(0), Rat(1)}, Mat2d::identity(), 2,
                          window1()),
      std::domain_error);

  // t = 0 at large y approaches the dominant constant term det(y)^{1/2} = s
  for (double s : {6.0, 9.0}) {
    auto v = fourier_coefficient(10, FourierIndex{Rat(0), Rat(0), Rat(0)},
                                 Mat2d::identity() * s, 4, window1());
    CHECK(std::abs(v.value - Cplx(s, 0.0)) < 5e-3 * s);
  }

  // negative definite indices vanish within the reported budget
  for (auto t : {FourierIndex{Rat(-1), Rat(0), Rat(-1)},
                 FourierIndex{Rat(-2), Rat(1, 2), Rat(-1)}}) {
    REQUIRE(t.signature() == FourierIndex::Signature::negative_definite);
    auto v = fourier_coefficient(10, t, Mat2d::identity(), 6, window1());
    CHECK(std::abs(v.value) < 3.0 * v.budget());
  }

  // signatures
  CHECK(FourierIndex{Rat(1), Rat(0), Rat(1)}.signature() ==
        FourierIndex::Signature::positive_definite);
  CHECK(FourierIndex{Rat(1), Rat(0), Rat(-1)}.signature() ==
        FourierIndex::Signature::indefinite);
  CHECK(FourierIndex{Rat(1), Rat(1), Rat(1)}.signature() ==
        FourierIndex::Signature::degenerate);
  CHECK(FourierIndex{Rat(0), Rat(1, 2), Rat(0)}.signature() ==
        FourierIndex::Signature::indefinite);
}

TEST_CASE("profiles tabulate the coefficient") {
  YGrid grid = YGrid::centered(Mat2d::identity(), 0.05, 3);
  FourierIndex t{Rat(1), Rat(0), Rat(-1)};
  CoefficientProfile prof = build_profile(2, t, grid, 4, window1(), 1);
  // center node equals the direct extraction
  auto direct = fourier_coefficient(2, t, grid.node(1, 1, 1), 4, window1());
  CHECK(std::abs(prof.samples[grid.index(1, 1, 1)] - direct.value) < 1e-14);
  CHECK(prof.errors[grid.index(1, 1, 1)] ==
        doctest::Approx(direct.budget()).epsilon(1e-12));

  // grids touching the cone boundary are rejected
  CHECK_THROWS_AS(YGrid::centered(Mat2d::sym(0.05, 0.0, 0.05), 0.05, 3),
                  std::domain_error);

  // level 0 kernel reproduces the profile through interpolation at nodes
  LiftedKernel k0 = lift_kernel(prof, 0, 1);
  ModularMap m = grid_map(k0.fn, 1);
  SiegelPoint p(Mat2d::zero(), grid.node(1, 1, 1));
  Cplx want = prof.samples[grid.index(1, 1, 1)];
  CHECK(std::abs(m.eval(p).coeffs[0] - want) < 1e-12 * (1.0 + std::abs(want)));
}

TEST_CASE("grid operator bookkeeping") {
  YGrid grid = YGrid::centered(Mat2d::identity(), 0.03, 9);
  FourierIndex t{Rat(1), Rat(0), Rat(-1)};
  CoefficientProfile prof = build_profile(2, t, grid, 4, window1(), 1);
  LiftedKernel k1 = lift_kernel(prof, 1, 2);
  CHECK(k1.fn.weight == Weight{0, 2});
  CHECK(k1.fn.margin == 2);
  LiftedKernel k2 = lift_kernel(prof, 2, 2);
  CHECK(k2.fn.weight == Weight{-2, 4});
  CHECK(k2.fn.margin == 4);
  CHECK_THROWS_AS(lift_kernel(prof, 3, 2), std::domain_error);

  // margin exhaustion raises a domain error naming the geometry
  GridFunction g = prof.as_grid_function();
  g.margin = 3;
  CHECK_THROWS_AS(apply_grid_projected(g, Dir::L, Comp::plus, 3), std::domain_error);
}

TEST_CASE("fstar assembly and decomposition at desk scale") {
  YGrid grid = YGrid::centered(Mat2d::identity(), 0.02, 13);
  std::vector<FourierIndex> ts = {{Rat(1), Rat(0), Rat(-1)}, {Rat(1), Rat(1, 2), Rat(-1)}};
  auto profs = build_profiles(2, ts, grid, 4, window1(), 2);
  std::vector<LiftedKernel> low, high;
  for (const auto& p : profs) {
    low.push_back(lift_kernel(p, 1, 2));
    high.push_back(lift_kernel(p, 2, 2));
  }

  CoefficientList empty;
  ModularMap zero_map = assemble_fstar(empty, low, 2);
  SiegelPoint p(Mat2d::sym(0.1, 0.0, -0.2), grid.node(5, 5, 5));
  CHECK(max_norm(zero_map.eval(p).coeffs) == 0.0);

  CoefficientList bad;
  bad.entries.emplace_back(FourierIndex{Rat(1), Rat(0), Rat(1)}, Cplx(1.0, 0.0));
  CHECK_THROWS_WITH_AS(assemble_fstar(bad, low, 2) /* positive definite index */,
                       doctest::Contains("(1,0,1)"), std::domain_error);

  CoefficientList single;
  single.entries.emplace_back(ts[0], Cplx(1.0, 0.0));
  ModularMap one = assemble_fstar(single, low, 2);
  ModularMap direct = grid_map(low[0].fn, 2);
  CHECK(rel_diff(one.eval(p).coeffs, direct.eval(p).coeffs) < 1e-14);

  // decomposition of an assembled series recovers its coefficients
  CoefficientList coeffs;
  coeffs.entries.emplace_back(ts[0], Cplx(1.5, -0.5));
  coeffs.entries.emplace_back(ts[1], Cplx(-0.25, 1.0));
  ModularMap f = assemble_fstar(coeffs, low, 2);
  std::mt19937_64 rng(5);
  std::vector<SiegelPoint> samples;
  auto nodes = high[0].fn.interior_nodes(0);
  REQUIRE_FALSE(nodes.empty());
  for (int i = 0; i < 8; ++i) {
    auto [a, b, c] = nodes[rng() % nodes.size()];
    samples.emplace_back(Mat2d::sym(0.3 * i - 1.0, 0.05 * i, 0.7 - 0.2 * i),
                         grid.node(a, b, c));
  }
  Decomposition dec = decompose(f, 4, low, high, samples, 2);
  for (std::size_t i = 0; i < coeffs.entries.size(); ++i)
    CHECK(std::abs(dec.recovered.entries[i].second - coeffs.entries[i].second) < 1e-6);
  for (const auto& tau : samples)
    CHECK(max_norm(dec.f_plus.eval(tau).coeffs) <
          1e-6 * std::max(1.0, max_norm(f.eval(tau).coeffs)));

  // a lowering-closed map decomposes with zero series part
  Weight w{0, 2};
  std::vector<TermList> comps(w.dim());
  for (int i = 0; i < w.dim(); ++i)
    comps[i] = scale_terms(term_e_tau(Mat2d::sym(1, 0.5, -1)), Cplx(1.0 + i, 0.0));
  ModularMap hol = ModularMap::symbolic(w, comps);
  Decomposition dech = decompose(hol, 4, low, high, samples, 2);
  for (const auto& [t, c] : dech.recovered.entries) CHECK(std::abs(c) < 1e-10);
  for (const auto& tau : samples)
    CHECK(rel_diff(dech.f_plus.eval(tau).coeffs, hol.eval(tau).coeffs) < 1e-9);

  // linearity of the decomposition at the sample points
  ModularMap sum = hol + f;
  Decomposition decs = decompose(sum, 4, low, high, samples, 2);
  for (const auto& tau : samples) {
    CVec lhs = decs.f_minus.eval(tau).coeffs;
    CVec rhs = dec.f_minus.eval(tau).coeffs;
    CHECK(rel_diff(lhs, rhs) < 1e-6);
  }
}

TEST_CASE("deterministic summation across job counts") {
  YGrid grid = YGrid::centered(Mat2d::identity(), 0.05, 5);
  FourierIndex t{Rat(1), Rat(0), Rat(-1)};
  CoefficientProfile p1 = build_profile(2, t, grid, 4, window1(), 1);
  CoefficientProfile p4 = build_profile(2, t, grid, 4, window1(), 4);
  for (std::size_t i = 0; i < p1.samples.size(); ++i) {
    CHECK(p1.samples[i] == p4.samples[i]);  // bitwise
    CHECK(p1.errors[i] == p4.errors[i]);
  }
}
