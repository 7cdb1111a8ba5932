#include "siegel/gridfn.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace siegel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// first-derivative Richardson weights on grid steps h, 2h, 4h
struct StencilSpec {
  int radius;
  double amp;  // |error amplification| of input noise, in units of 1/h
};

StencilSpec stencil_spec(int levels) {
  switch (levels) {
    case 1: return {1, 1.0};
    case 2: return {2, 1.5};
    case 3: return {4, 1.8};
    default: throw std::invalid_argument("grid stencils support 1..3 Richardson levels");
  }
}

}  // namespace

YGrid YGrid::centered(const Mat2d& center, double h, int n) {
  if (n < 3 || h <= 0) throw std::invalid_argument("YGrid: need n >= 3, h > 0");
  YGrid g;
  g.h = h;
  g.n = n;
  double half = h * (n - 1) / 2.0;
  g.y1_0 = center(0, 0) - half;
  g.v_0 = center(0, 1) - half;
  g.y2_0 = center(1, 1) - half;
  if (g.spd_margin() <= 0)
    throw std::domain_error("YGrid: grid touches the positive-definite cone boundary");
  return g;
}

double YGrid::spd_margin() const {
  double worst = 1e300;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) worst = std::min(worst, min_eigenvalue(node(i, j, m)));
  return worst;
}

std::vector<std::array<int, 3>> GridFunction::interior_nodes(int extra) const {
  std::vector<std::array<int, 3>> out;
  int lo = margin + extra, hi = grid.n - 1 - margin - extra;
  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j)
      for (int m = lo; m <= hi; ++m) out.push_back({i, j, m});
  return out;
}

double GridFunction::max_value_norm() const {
  double r = 0;
  for (auto [i, j, m] : interior_nodes())
    for (int c = 0; c < dim(); ++c)
      r = std::max(r, std::abs(value(grid.index(i, j, m), c)));
  return r;
}

int stencil_radius(int rich_levels) { return stencil_spec(rich_levels).radius; }

GridFunction apply_grid_projected(const GridFunction& g, Dir dir, Comp comp,
                                  int rich_levels) {
  const StencilSpec spec = stencil_spec(rich_levels);
  const int r = spec.radius;
  const int n = g.grid.n;
  const int lo = g.margin + r, hi = n - 1 - g.margin - r;
  if (lo > hi) {
    std::ostringstream os;
    os << "grid operator: stencil exhausted (margin " << g.margin << " + radius " << r
       << " leaves no interior on an n=" << n << " grid)";
    throw std::domain_error(os.str());
  }

  ProjectionTable table(g.weight);
  Weight tw = table.target(dir, comp);
  const Matrix<Cplx>& proj = table.projection(dir, comp);
  Matrix<Cplx> tmat = convert_matrix<Rat, Cplx>(
      symmetrize_matrix(g.weight.l), [](const Rat& q) { return to_complex(q); });

  GridFunction out;
  out.weight = tw;
  out.grid = g.grid;
  out.t = g.t;
  out.margin = g.margin + r;
  out.values.assign(g.grid.size() * std::max(tw.dim(), 0), Cplx(0.0));

  if (!table.present(comp)) {
    out.err = 0.0;
    return out;
  }

  const int dim = g.dim();
  const double h = g.grid.h;
  const double tmult[3] = {g.t(0, 0), 2.0 * g.t(0, 1), g.t(1, 1)};

  double fd_obs = 0.0;     // observed Richardson defect
  double amp_scale = 0.0;  // |linear map| applied to the input error

  // row sums of |proj| for the error propagation
  double proj_rowsum = 0.0;
  for (std::size_t i = 0; i < proj.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < proj.cols(); ++j) s += std::abs(proj(i, j));
    proj_rowsum = std::max(proj_rowsum, s);
  }
  double tmat_rowsum = 1.0;
  if (g.weight.l > 0) {
    for (std::size_t i = 0; i < tmat.rows(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < tmat.cols(); ++j) s += std::abs(tmat(i, j));
      tmat_rowsum = std::max(tmat_rowsum, s);
    }
  }

  std::array<CVec, 3> dx, dy;
  for (auto& v : dx) v.resize(dim);
  for (auto& v : dy) v.resize(dim);
  CVec fval(dim), tensor;

  for (int i = lo; i <= hi; ++i)
    for (int j = lo; j <= hi; ++j)
      for (int m = lo; m <= hi; ++m) {
        const Mat2d y = g.grid.node(i, j, m);
        const SiegelPoint pt(Mat2d::zero(), y);
        const std::size_t base = g.grid.index(i, j, m);
        for (int c = 0; c < dim; ++c) fval[c] = g.value(base, c);

        for (int axis = 0; axis < 3; ++axis) {
          int si = axis == 0 ? 1 : 0, sj = axis == 1 ? 1 : 0, sm = axis == 2 ? 1 : 0;
          for (int c = 0; c < dim; ++c) {
            auto sample = [&](int off) {
              return g.value(g.grid.index(i + si * off, j + sj * off, m + sm * off), c);
            };
            Cplx d1 = (sample(1) - sample(-1)) / (2.0 * h);
            Cplx best = d1;
            double defect = 0.0;
            if (rich_levels >= 2) {
              Cplx d2 = (sample(2) - sample(-2)) / (4.0 * h);
              Cplx e1 = (4.0 * d1 - d2) / 3.0;
              best = e1;
              defect = std::abs(e1 - d1);
              if (rich_levels >= 3) {
                Cplx d4 = (sample(4) - sample(-4)) / (8.0 * h);
                Cplx e2 = (4.0 * d2 - d4) / 3.0;
                Cplx ee = (16.0 * e1 - e2) / 15.0;
                defect = std::abs(ee - e1);
                best = ee;
              }
            }
            dy[axis][c] = best;
            fd_obs = std::max(fd_obs, defect);
            dx[axis][c] = Cplx(0.0, kTwoPi * tmult[axis]) * fval[c];
          }
        }

        tensor = dir == Dir::L ? assemble_lower(pt, dx, dy)
                               : assemble_raise(pt, g.weight, fval, dx, dy, tmat);
        const std::size_t obase = base * tw.dim();
        for (std::size_t row = 0; row < proj.rows(); ++row) {
          Cplx acc = 0;
          for (std::size_t colv = 0; colv < proj.cols(); ++colv)
            acc += proj(row, colv) * tensor[colv];
          out.values[obase + row] = acc;
        }

        // first-order error transport through the same linear maps
        double ymax = std::max(1e-30, max_abs(y));
        double dmag = spec.amp / h * g.err;               // derivative channels
        double vmag = (kTwoPi * max_abs(g.t)) * g.err;    // multiplier channels
        double tensor_err;
        if (dir == Dir::L) {
          tensor_err = 4.0 * ymax * ymax * (dmag + vmag);
        } else {
          double invnorm = max_abs(y.inverse());
          tensor_err = (dmag + vmag) +
                       (0.5 * std::abs(g.weight.k) + 0.5 * g.weight.l * tmat_rowsum) *
                           2.0 * invnorm * g.err;
        }
        amp_scale = std::max(amp_scale, proj_rowsum * tensor_err);
      }

  out.err = amp_scale + proj_rowsum * fd_obs;
  return out;
}

namespace {

// 1D cubic Lagrange weights on nodes {-1, 0, 1, 2} for parameter u in [0, 1]
std::array<double, 4> cubic_weights(double u) {
  double u2 = u * u, u3 = u2 * u;
  return {(-u3 + 3 * u2 - 2 * u) / 6.0, (3 * u3 - 6 * u2 - 3 * u + 6) / 6.0,
          (-3 * u3 + 3 * u2 + 6 * u) / 6.0, (u3 - u) / 6.0};
}

}  // namespace

CVec interpolate(const GridFunction& g, const Mat2d& y) {
  const YGrid& gr = g.grid;
  double fi = (y(0, 0) - gr.y1_0) / gr.h;
  double fj = (y(0, 1) - gr.v_0) / gr.h;
  double fm = (y(1, 1) - gr.y2_0) / gr.h;
  auto cell = [&](double f, int& i0, double& u) {
    int c = int(std::floor(f));
    // clamp so the 4-node stencil stays on the grid
    c = std::max(1, std::min(gr.n - 3, c));
    i0 = c - 1;
    u = f - c;
  };
  int i0, j0, m0;
  double ui, uj, um;
  cell(fi, i0, ui);
  cell(fj, j0, uj);
  cell(fm, m0, um);
  if (fi < 0 || fi > gr.n - 1 || fj < 0 || fj > gr.n - 1 || fm < 0 || fm > gr.n - 1)
    throw std::domain_error("interpolate: point outside the tabulated grid");
  auto wi = cubic_weights(ui), wj = cubic_weights(uj), wm = cubic_weights(um);
  CVec out(g.dim(), Cplx(0.0));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        double w = wi[a] * wj[b] * wm[c];
        if (w == 0.0) continue;
        std::size_t base = gr.index(i0 + a, j0 + b, m0 + c) * g.dim();
        for (int k = 0; k < g.dim(); ++k) out[k] += w * g.values[base + k];
      }
  return out;
}

namespace {

class GridCore final : public MapCore {
 public:
  GridCore(GridFunction g, int rich_levels)
      : g_(std::move(g)), rich_(rich_levels) {}

  int dim() const override { return g_.dim(); }

  CVec eval(const SiegelPoint& pt) const override {
    CVec v = interpolate(g_, pt.y);
    double tx = g_.t(0, 0) * pt.x1() + 2.0 * g_.t(0, 1) * pt.u() + g_.t(1, 1) * pt.x2();
    Cplx phase = std::polar(1.0, kTwoPi * tx);
    for (auto& z : v) z *= phase;
    return v;
  }

  void derivs(const SiegelPoint& pt, std::array<CVec, 3>& dxo,
              std::array<CVec, 3>& dyo) const override {
    // x derivatives are exact through the character, y derivatives fall back
    // to differences of the interpolant
    CVec v = eval(pt);
    const double tmult[3] = {g_.t(0, 0), 2.0 * g_.t(0, 1), g_.t(1, 1)};
    for (int axis = 0; axis < 3; ++axis) {
      dxo[axis].resize(v.size());
      dyo[axis].resize(v.size());
      for (std::size_t c = 0; c < v.size(); ++c)
        dxo[axis][c] = Cplx(0.0, kTwoPi * tmult[axis]) * v[c];
      double h = g_.grid.h;
      Mat2d yp = pt.y, ym = pt.y;
      if (axis == 0) {
        yp(0, 0) += h;
        ym(0, 0) -= h;
      } else if (axis == 1) {
        yp(0, 1) += h;
        yp(1, 0) += h;
        ym(0, 1) -= h;
        ym(1, 0) -= h;
      } else {
        yp(1, 1) += h;
        ym(1, 1) -= h;
      }
      CVec vp = interpolate(g_, yp), vm = interpolate(g_, ym);
      double tx = g_.t(0, 0) * pt.x1() + 2.0 * g_.t(0, 1) * pt.u() + g_.t(1, 1) * pt.x2();
      Cplx phase = std::polar(1.0, kTwoPi * tx);
      for (std::size_t c = 0; c < v.size(); ++c)
        dyo[axis][c] = phase * (vp[c] - vm[c]) / (2.0 * h);
    }
  }

  MapCorePtr apply_projected(const Weight&, Dir dir, Comp comp) const override {
    GridFunction next = apply_grid_projected(g_, dir, comp, rich_);
    return std::make_shared<GridCore>(std::move(next), rich_);
  }

  double error_budget() const override { return g_.err; }

  const GridFunction& grid() const { return g_; }

 private:
  GridFunction g_;
  int rich_;
};

}  // namespace

ModularMap grid_map(GridFunction g, int rich_levels) {
  Weight w = g.weight;
  return ModularMap(w, std::make_shared<GridCore>(std::move(g), rich_levels));
}

const GridFunction* grid_of(const ModularMap& f) {
  if (auto* core = dynamic_cast<const GridCore*>(&f.core())) return &core->grid();
  return nullptr;
}

}  // namespace siegel
