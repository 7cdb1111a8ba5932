#pragma once

#include <map>
#include <string>
#include <vector>

#include "siegel/gl2.hpp"

namespace siegel {

// dominant pair (a, b), a >= b, naming a K-type
struct KTypePair {
  int a = 0;
  int b = 0;

  bool operator==(const KTypePair& o) const { return a == o.a && b == o.b; }
  bool operator<(const KTypePair& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
  bool dominant() const { return a >= b; }
};

// (a, b) corresponds to det^b sym^{a-b}
Weight pair_to_weight(const KTypePair& p);
KTypePair weight_to_pair(const Weight& w);

enum class MSide { plus, minus };

// Clebsch-Gordan transition targets of a K-type under m^+ or m^-; the three
// regimes a - b >= 2, a - b = 1, a = b produce 3, 2, 1 targets
std::vector<KTypePair> transitions(const KTypePair& p, MSide side);

struct DirectionEntry {
  std::string basis_name;  // element of the sp4 basis carrying the transition
  int da = 0, db = 0;      // K-type pair offset
};

struct PiOp {
  Dir dir;
  Comp comp;
  bool operator<(const PiOp& o) const {
    return dir != o.dir ? dir < o.dir : comp < o.comp;
  }
  std::string name() const {
    return std::string("pi_") + dir_name(dir) + comp_name(comp);
  }
};

// fixed correspondence between projected operators, basis directions and
// K-type offsets
const std::map<PiOp, DirectionEntry>& direction_dictionary();

// linear relation w_a a + w_b b = w_c killing transitions to the side where
// sign * (w_a a' + w_b b' - w_c) < 0
struct Wall {
  int wa = 0, wb = 0, wc = 0;
  int sign = 1;
};

// closure cone of a minimal K-type under a set of pair offsets, inside the
// dominant region
struct SupportSpec {
  KTypePair minimal;
  std::vector<std::pair<int, int>> directions;
  std::vector<Wall> walls;

  bool contains(const KTypePair& p) const;
  std::vector<KTypePair> enumerate_window(int amin, int amax, int bmin, int bmax) const;
  std::string to_json() const;
};

enum class ParabolicType { hol, antihol, sk };

SupportSpec aq_support(ParabolicType q, const KTypePair& minimal);

// minimal K-type 2 rho_q + lambda, with 2 rho_q the sum of the pair offsets
// carried by the directions spanning u_q within the noncompact part
KTypePair aq_minimal_from_parameter(ParabolicType q, const KTypePair& lambda);

// composition-series layers of the degenerate principal series at even k > 0
// over even dominant pairs: bottom, middle (two summands merged), finite top.
struct SocleSeries {
  int k = 0;

  bool in_even_lattice(const KTypePair& p) const;
  // layer index: 0 bottom (a >= k, b <= -k), 1 middle, 2 top (a < k, b > -k)
  int layer(const KTypePair& p) const;
  bool in_bottom(const KTypePair& p) const;
  bool in_middle(const KTypePair& p) const;
  bool in_top(const KTypePair& p) const;

  std::vector<KTypePair> top_layer() const;  // finite
  std::vector<Wall> walls() const;
  std::string to_json() const;
};

SocleSeries lee_socle(int k);

}  // namespace siegel
