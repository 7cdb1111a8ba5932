#pragma once

#include <vector>

#include "siegel/modular_map.hpp"

namespace siegel {

// uniform cubic grid in the (y1, v, y2) coordinates of the positive cone
struct YGrid {
  double y1_0 = 0, v_0 = 0, y2_0 = 0;
  double h = 0.02;
  int n = 0;

  static YGrid centered(const Mat2d& center, double h, int n);

  Mat2d node(int i, int j, int m) const {
    return Mat2d::sym(y1_0 + i * h, v_0 + j * h, y2_0 + m * h);
  }
  std::size_t index(int i, int j, int m) const {
    return (std::size_t(i) * n + j) * n + m;
  }
  std::size_t size() const { return std::size_t(n) * n * n; }
  bool inside(int i) const { return i >= 0 && i < n; }
  // smallest eigenvalue over all nodes
  double spd_margin() const;
};

// vector-valued samples over a YGrid with a shared e(tx) character and a
// scalar absolute error estimate; margin marks how many boundary layers have
// been consumed by stencils
struct GridFunction {
  Weight weight;
  YGrid grid;
  Mat2d t = Mat2d::zero();
  int margin = 0;
  std::vector<Cplx> values;  // node-major, weight.dim() entries per node
  double err = 0.0;

  int dim() const { return weight.dim(); }
  Cplx value(std::size_t node, int comp) const { return values[node * dim() + comp]; }
  bool interior(int i, int jradius) const {
    return i >= margin + jradius && i < grid.n - margin - jradius;
  }
  std::vector<std::array<int, 3>> interior_nodes(int extra = 0) const;
  double max_value_norm() const;
};

// stencil radius consumed by one operator application at the given number of
// Richardson levels
int stencil_radius(int rich_levels);

// pi_{dir, comp} o (L | R) applied on the grid; margin grows by the stencil
// radius, the error estimate is propagated first-order
GridFunction apply_grid_projected(const GridFunction& g, Dir dir, Comp comp,
                                  int rich_levels);

// tricubic interpolation of all components at an arbitrary interior y
CVec interpolate(const GridFunction& g, const Mat2d& y);

// ModularMap view of a grid function: evaluation interpolates, operator
// applications run natively on the grid
ModularMap grid_map(GridFunction g, int rich_levels = 2);
const GridFunction* grid_of(const ModularMap& f);

}  // namespace siegel
