#pragma once

#include <string>
#include <vector>

#include "siegel/ktypes.hpp"

namespace siegel {

struct DiagramWindow {
  int amin = -6, amax = 6, bmin = -6, bmax = 6;
  bool empty() const { return amin > amax || bmin > bmax; }
};

// Deterministic SVG: one circle per dominant pair in the window, filled when
// some support contains it; walls drawn as lines with an arrowhead pointing
// to the surviving side.
std::string render_diagram(const std::vector<SupportSpec>& supports,
                           const std::vector<Wall>& walls, const DiagramWindow& win);

// same rendering from explicit point sets (one fill color per set)
std::string render_diagram_points(const std::vector<std::vector<KTypePair>>& fills,
                                  const std::vector<Wall>& walls,
                                  const DiagramWindow& win);

}  // namespace siegel
