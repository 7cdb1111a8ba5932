#include <algorithm>
#include <fstream>
#include <set>

#include "doctest.h"
#include "siegel/diagram.hpp"
#include "siegel/ktypes.hpp"

using namespace siegel;

TEST_CASE("pair / weight dictionary") {
  CHECK(pair_to_weight({3, 3}) == Weight{3, 0});
  CHECK(pair_to_weight({1, -1}) == Weight{-1, 2});  // (k/2-1, 1-k/2) at k = 4
  CHECK(pair_to_weight({2, -2}) == Weight{-2, 4});  // (k/2, -k/2) at k = 4
  CHECK(weight_to_pair(Weight{-2, 4}) == KTypePair{2, -2});
  CHECK_THROWS_AS(pair_to_weight({0, 1}), std::domain_error);
}

TEST_CASE("transition targets in the three regimes") {
  auto eq = [](std::vector<KTypePair> got, std::vector<KTypePair> want) {
    std::sort(want.begin(), want.end());
    return got == want;
  };
  CHECK(eq(transitions({5, 1}, MSide::plus), {{7, 1}, {6, 2}, {5, 3}}));
  CHECK(eq(transitions({3, 2}, MSide::minus), {{3, 0}, {2, 1}}));
  CHECK(eq(transitions({2, 2}, MSide::plus), {{4, 2}}));
  CHECK(eq(transitions({2, 2}, MSide::minus), {{2, 0}}));
  CHECK(eq(transitions({3, 2}, MSide::plus), {{5, 2}, {4, 3}}));
}

TEST_CASE("transitions on an exhaustive window") {
  for (int a = -10; a <= 10; ++a)
    for (int b = -10; b <= a; ++b) {
      for (MSide side : {MSide::plus, MSide::minus}) {
        auto ts = transitions({a, b}, side);
        std::size_t expect = std::min(a - b, 2) + 1;
        CHECK(ts.size() == expect);
        int s = side == MSide::plus ? 1 : -1;
        std::set<std::pair<int, int>> offsets;
        for (const auto& p : ts) {
          CHECK(p.dominant());
          offsets.insert({p.a - a, p.b - b});
        }
        // all targets are among the six lattice offsets on the correct side
        for (auto [da, db] : offsets)
          CHECK(((da == 2 * s && db == 0) || (da == s && db == s) ||
                 (da == 0 && db == 2 * s)));
      }
    }
}

TEST_CASE("direction dictionary") {
  const auto& dict = direction_dictionary();
  REQUIRE(dict.size() == 6);
  CHECK(dict.at({Dir::L, Comp::plus}).basis_name == "e_m-");
  CHECK(dict.at({Dir::L, Comp::plus}).da == 0);
  CHECK(dict.at({Dir::L, Comp::plus}).db == -2);
  CHECK(dict.at({Dir::L, Comp::zero}).basis_name == "h_m-");
  CHECK(dict.at({Dir::L, Comp::minus}).basis_name == "f_m-");
  CHECK(dict.at({Dir::R, Comp::plus}).da == 2);
  CHECK(dict.at({Dir::R, Comp::zero}).da == 1);
  CHECK(dict.at({Dir::R, Comp::minus}).db == 2);

  // offsets agree with pair_to_weight applied to the projection targets
  for (const auto& [op, entry] : dict) {
    for (KTypePair p : {KTypePair{6, 2}, KTypePair{5, -1}}) {
      Weight sigma = pair_to_weight(p);
      ProjectionTable table(sigma);
      Weight target = table.target(op.dir, op.comp);
      KTypePair q = weight_to_pair(target);
      CHECK(q.a - p.a == entry.da);
      CHECK(q.b - p.b == entry.db);
    }
  }
}

namespace {

// breadth-first closure oracle over a window
std::set<std::pair<int, int>> closure_oracle(KTypePair minimal,
                                             const std::vector<std::pair<int, int>>& dirs,
                                             int lo, int hi) {
  std::set<std::pair<int, int>> seen;
  std::vector<KTypePair> queue = {minimal};
  seen.insert({minimal.a, minimal.b});
  while (!queue.empty()) {
    KTypePair p = queue.back();
    queue.pop_back();
    for (auto [da, db] : dirs) {
      KTypePair q{p.a + da, p.b + db};
      if (!q.dominant()) continue;
      if (q.a < lo || q.a > hi || q.b < lo || q.b > hi) continue;
      if (seen.insert({q.a, q.b}).second) queue.push_back(q);
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("support cones against the closure oracle") {
  // sk cone from (m, -m): closed form
  SupportSpec sk = aq_support(ParabolicType::sk, {2, -2});
  for (int a = -8; a <= 8; ++a)
    for (int b = -8; b <= 8; ++b) {
      bool expect = a >= 2 && b <= -2 && a % 2 == 0 && b % 2 == 0 && a >= b;
      CHECK(sk.contains({a, b}) == expect);
    }
  CHECK(sk.contains(sk.minimal));

  // oracle comparison for all three parabolic types
  for (auto q : {ParabolicType::sk, ParabolicType::hol, ParabolicType::antihol}) {
    KTypePair minimal = q == ParabolicType::sk ? KTypePair{3, -3} : KTypePair{1, 1};
    SupportSpec spec = aq_support(q, minimal);
    auto oracle = closure_oracle(minimal, spec.directions, -9, 9);
    for (int a = -7; a <= 7; ++a)
      for (int b = -7; b <= std::min(a, 7); ++b)
        CHECK(spec.contains({a, b}) == (oracle.count({a, b}) > 0));
  }

  // the four transitions killed on the sk module are not support directions
  SupportSpec sk2 = aq_support(ParabolicType::sk, {4, -4});
  const auto& dict = direction_dictionary();
  for (PiOp op : {PiOp{Dir::L, Comp::zero}, PiOp{Dir::L, Comp::minus},
                  PiOp{Dir::R, Comp::zero}, PiOp{Dir::R, Comp::minus}}) {
    const auto& e = dict.at(op);
    KTypePair target{sk2.minimal.a + e.da, sk2.minimal.b + e.db};
    CHECK_FALSE(sk2.contains(target));
  }

  // 2 rho_q + lambda helper: twice the half-sum of the direction weights
  CHECK(aq_minimal_from_parameter(ParabolicType::sk, {1, -1}) == KTypePair{3, -3});
  CHECK(aq_minimal_from_parameter(ParabolicType::hol, {0, 0}) == KTypePair{3, 3});
  CHECK(aq_minimal_from_parameter(ParabolicType::antihol, {5, 5}) == KTypePair{2, 2});
  CHECK(aq_minimal_from_parameter(ParabolicType::antihol, {0, 0}) == KTypePair{-3, -3});
  CHECK_THROWS_AS(aq_minimal_from_parameter(ParabolicType::hol, {0, 2}),
                  std::domain_error);

  // walls of the sk cone
  REQUIRE(sk.walls.size() == 2);
  CHECK(sk.walls[0].wa == 1);
  CHECK(sk.walls[0].sign == 1);
  CHECK(sk.walls[1].wb == 1);
  CHECK(sk.walls[1].sign == -1);
}

TEST_CASE("lee socle layers") {
  CHECK_THROWS_AS(lee_socle(3), std::domain_error);
  CHECK_THROWS_AS(lee_socle(0), std::domain_error);

  SocleSeries s4 = lee_socle(4);
  auto top4 = s4.top_layer();
  std::vector<KTypePair> want = {{-2, -2}, {0, -2}, {0, 0}, {2, -2}, {2, 0}, {2, 2}};
  CHECK(top4 == want);

  CHECK(lee_socle(2).top_layer() == std::vector<KTypePair>{{0, 0}});
  CHECK(lee_socle(6).top_layer().size() == 15);

  // the layers partition every window of the even lattice
  for (int k : {2, 4, 6}) {
    SocleSeries s = lee_socle(k);
    for (int a = -20; a <= 20; ++a)
      for (int b = -20; b <= a; ++b) {
        KTypePair p{a, b};
        if (!s.in_even_lattice(p)) continue;
        int count = int(s.in_bottom(p)) + int(s.in_middle(p)) + int(s.in_top(p));
        CHECK(count == 1);
      }
  }

  // finite top layer matches its defining inequalities
  for (const auto& p : top4) {
    CHECK(p.a < 4);
    CHECK(p.b > -4);
  }
}

TEST_CASE("diagram rendering") {
  DiagramWindow win{-6, 6, -6, 6};
  // empty support: all circles open
  std::string empty = render_diagram_points({}, {}, win);
  std::size_t circles = 0, open_circles = 0;
  for (std::size_t pos = 0; (pos = empty.find("<circle", pos)) != std::string::npos; ++pos)
    ++circles;
  for (std::size_t pos = 0; (pos = empty.find("fill=\"none\"", pos)) != std::string::npos;
       ++pos)
    ++open_circles;
  CHECK(circles > 0);
  CHECK(circles == open_circles);

  // a vertical wall renders a vertical line
  Wall wall{1, 0, 4, 1};
  std::string with_wall = render_diagram_points({}, {wall}, win);
  CHECK(with_wall.find("marker-end=\"url(#arrow)\"") != std::string::npos);

  CHECK_THROWS_AS(render_diagram_points({}, {}, DiagramWindow{3, -3, 0, 0}),
                  std::domain_error);

  // golden snapshot of the sk cone, produced by the closure oracle and kept
  // under tests/data
  SupportSpec sk = aq_support(ParabolicType::sk, {2, -2});
  std::string svg = render_diagram({sk}, sk.walls, win);
  std::ifstream gf("data/sk_support.svg", std::ios::binary);
  if (!gf) gf.open("tests/data/sk_support.svg", std::ios::binary);
  if (!gf) gf.open("../tests/data/sk_support.svg", std::ios::binary);
  REQUIRE(gf);
  std::string golden((std::istreambuf_iterator<char>(gf)), std::istreambuf_iterator<char>());
  CHECK(svg == golden);
}
