#include "siegel/ktypes.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace siegel {

Weight pair_to_weight(const KTypePair& p) {
  if (!p.dominant()) throw std::domain_error("pair_to_weight: pair is not dominant");
  return {p.b, p.a - p.b};
}

KTypePair weight_to_pair(const Weight& w) {
  if (w.l < 0) throw std::domain_error("weight_to_pair: negative sym power");
  return {w.k + w.l, w.k};
}

std::vector<KTypePair> transitions(const KTypePair& p, MSide side) {
  if (!p.dominant()) throw std::domain_error("transitions: pair is not dominant");
  int s = side == MSide::plus ? 1 : -1;
  std::vector<KTypePair> out;
  int gap = p.a - p.b;
  if (gap >= 2) {
    out = {{p.a + 2 * s, p.b}, {p.a + s, p.b + s}, {p.a, p.b + 2 * s}};
  } else if (gap == 1) {
    if (side == MSide::plus)
      out = {{p.a + 2, p.b}, {p.a + 1, p.b + 1}};
    else
      out = {{p.a, p.b - 2}, {p.a - 1, p.b - 1}};
  } else {
    out = {side == MSide::plus ? KTypePair{p.a + 2, p.b} : KTypePair{p.a, p.b - 2}};
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::map<PiOp, DirectionEntry>& direction_dictionary() {
  static const std::map<PiOp, DirectionEntry> dict = {
      {{Dir::L, Comp::plus}, {"e_m-", 0, -2}},
      {{Dir::L, Comp::zero}, {"h_m-", -1, -1}},
      {{Dir::L, Comp::minus}, {"f_m-", -2, 0}},
      {{Dir::R, Comp::plus}, {"e_m+", 2, 0}},
      {{Dir::R, Comp::zero}, {"h_m+", 1, 1}},
      {{Dir::R, Comp::minus}, {"f_m+", 0, 2}},
  };
  return dict;
}

bool SupportSpec::contains(const KTypePair& p) const {
  if (!p.dominant()) return false;
  if (p == minimal) return true;
  // all direction sets used here move each coordinate monotonically, so a
  // bounded dynamic program over the rectangle spanned by minimal and p is
  // exhaustive
  int alo = std::min(minimal.a, p.a), ahi = std::max(minimal.a, p.a);
  int blo = std::min(minimal.b, p.b), bhi = std::max(minimal.b, p.b);
  int na = ahi - alo + 1, nb = bhi - blo + 1;
  std::vector<char> reach(std::size_t(na) * nb, 0);
  auto idx = [&](int a, int b) { return std::size_t(a - alo) * nb + (b - blo); };
  std::vector<KTypePair> stack = {minimal};
  if (minimal.a < alo || minimal.a > ahi || minimal.b < blo || minimal.b > bhi)
    return false;
  reach[idx(minimal.a, minimal.b)] = 1;
  while (!stack.empty()) {
    KTypePair q = stack.back();
    stack.pop_back();
    if (q == p) return true;
    for (auto [da, db] : directions) {
      KTypePair r{q.a + da, q.b + db};
      if (r.a < alo || r.a > ahi || r.b < blo || r.b > bhi) continue;
      if (reach[idx(r.a, r.b)]) continue;
      reach[idx(r.a, r.b)] = 1;
      stack.push_back(r);
    }
  }
  return false;
}

std::vector<KTypePair> SupportSpec::enumerate_window(int amin, int amax, int bmin,
                                                     int bmax) const {
  std::vector<KTypePair> out;
  for (int a = amin; a <= amax; ++a)
    for (int b = bmin; b <= std::min(a, bmax); ++b)
      if (contains({a, b})) out.push_back({a, b});
  return out;
}

std::string SupportSpec::to_json() const {
  std::ostringstream os;
  os << "{\"minimal\":[" << minimal.a << "," << minimal.b << "],\"directions\":[";
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (i) os << ",";
    os << "[" << directions[i].first << "," << directions[i].second << "]";
  }
  os << "],\"walls\":[";
  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (i) os << ",";
    os << "{\"wa\":" << walls[i].wa << ",\"wb\":" << walls[i].wb
       << ",\"wc\":" << walls[i].wc << ",\"sign\":" << walls[i].sign << "}";
  }
  os << "]}";
  return os.str();
}

SupportSpec aq_support(ParabolicType q, const KTypePair& minimal) {
  if (!minimal.dominant()) throw std::domain_error("aq_support: minimal pair not dominant");
  SupportSpec s;
  s.minimal = minimal;
  const auto& dict = direction_dictionary();
  auto dir_of = [&](Dir d, Comp c) {
    const auto& e = dict.at({d, c});
    return std::pair<int, int>{e.da, e.db};
  };
  switch (q) {
    case ParabolicType::hol:
      // u cap m spanned by h_m+, e_m+, f_m+
      s.directions = {dir_of(Dir::R, Comp::zero), dir_of(Dir::R, Comp::plus),
                      dir_of(Dir::R, Comp::minus)};
      break;
    case ParabolicType::antihol:
      s.directions = {dir_of(Dir::L, Comp::zero), dir_of(Dir::L, Comp::plus),
                      dir_of(Dir::L, Comp::minus)};
      break;
    case ParabolicType::sk:
      // u cap m spanned by e_m+, e_m-
      s.directions = {dir_of(Dir::R, Comp::plus), dir_of(Dir::L, Comp::plus)};
      break;
  }
  // boundary walls of the closure in each coordinate
  bool a_up = false, a_down = false, b_up = false, b_down = false;
  for (auto [da, db] : s.directions) {
    a_up |= da > 0;
    a_down |= da < 0;
    b_up |= db > 0;
    b_down |= db < 0;
  }
  if (!a_down) s.walls.push_back({1, 0, minimal.a, 1});
  if (!a_up) s.walls.push_back({1, 0, minimal.a, -1});
  if (!b_down) s.walls.push_back({0, 1, minimal.b, 1});
  if (!b_up) s.walls.push_back({0, 1, minimal.b, -1});
  return s;
}

KTypePair aq_minimal_from_parameter(ParabolicType q, const KTypePair& lambda) {
  SupportSpec probe = aq_support(q, KTypePair{0, 0});
  int da = 0, db = 0;
  for (auto [a, b] : probe.directions) {
    da += a;
    db += b;
  }
  KTypePair m{lambda.a + da, lambda.b + db};
  if (!m.dominant())
    throw std::domain_error("aq_minimal_from_parameter: parameter leaves the dominant cone");
  return m;
}

bool SocleSeries::in_even_lattice(const KTypePair& p) const {
  return p.dominant() && p.a % 2 == 0 && p.b % 2 == 0;
}

int SocleSeries::layer(const KTypePair& p) const {
  if (!in_even_lattice(p)) throw std::domain_error("SocleSeries: pair outside 2-Lambda");
  bool x2 = p.a >= k;   // right of the a-wall
  bool y1 = p.b <= -k;  // below the b-wall
  if (x2 && y1) return 0;
  if (!x2 && !y1) return 2;
  return 1;
}

bool SocleSeries::in_bottom(const KTypePair& p) const { return layer(p) == 0; }
bool SocleSeries::in_middle(const KTypePair& p) const { return layer(p) == 1; }
bool SocleSeries::in_top(const KTypePair& p) const { return layer(p) == 2; }

std::vector<KTypePair> SocleSeries::top_layer() const {
  std::vector<KTypePair> out;
  for (int a = -k + 2; a <= k - 2; a += 2)
    for (int b = -k + 2; b <= a; b += 2) out.push_back({a, b});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Wall> SocleSeries::walls() const {
  return {{1, 0, k, 1}, {0, 1, -k, -1}};
}

std::string SocleSeries::to_json() const {
  std::ostringstream os;
  os << "{\"k\":" << k << ",\"top_layer\":[";
  auto top = top_layer();
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (i) os << ",";
    os << "[" << top[i].a << "," << top[i].b << "]";
  }
  os << "]}";
  return os.str();
}

SocleSeries lee_socle(int k) {
  if (k <= 0 || k % 2 != 0)
    throw std::domain_error("lee_socle: k must be even and positive");
  return SocleSeries{k};
}

}  // namespace siegel
