#include "siegel/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "siegel/bessel.hpp"
#include "siegel/parallel.hpp"

namespace siegel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Cplx cpow_int(Cplx z, int k) {
  // k >= 0
  Cplx r = 1.0;
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

struct ComplexAccumulator {
  Accumulator re, im;
  void add(Cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Cplx total() const { return {re.total(), im.total()}; }
};

}  // namespace

CosetWindow CosetWindow::build(int height) {
  CosetWindow w;
  w.height = height;
  w.classes = enumerate_cosets(height);
  std::set<std::array<std::array<std::int64_t, 4>, 2>> lower;
  if (height >= 1) {
    for (const auto& rep : enumerate_cosets(height - 1))
      lower.insert(pair_canonical_form(rep.c, rep.d));
  }
  w.in_lower.resize(w.classes.size());
  for (std::size_t i = 0; i < w.classes.size(); ++i)
    w.in_lower[i] =
        lower.count(pair_canonical_form(w.classes[i].c, w.classes[i].d)) ? 1 : 0;
  return w;
}

Cplx eisenstein_term(int k, const SiegelPoint& tau, const CosetRep& rep) {
  Mat2c w = complexify(rep.cd()) * tau.tau() + complexify(rep.dd());
  Cplx det = w.det();
  double a = std::abs(det);
  return std::sqrt(tau.y.det()) * cpow_int(1.0 / det, k) / a;
}

Cplx skew_term(int k_plus_1, const SiegelPoint& tau, const CosetRep& rep) {
  int k = k_plus_1 - 1;
  Mat2c w = complexify(rep.cd()) * tau.tau() + complexify(rep.dd());
  Cplx det = w.det();
  double a = std::abs(det);
  double a2k1 = std::pow(a, 2 * k + 1);
  return cpow_int(det, k) / a2k1;
}

Cplx eisenstein_sum(int k, const SiegelPoint& tau, const std::vector<CosetRep>& classes) {
  if (k % 2 != 0) throw std::domain_error("eisenstein_sum: k must be even");
  ComplexAccumulator acc;
  for (const auto& rep : classes) acc.add(eisenstein_term(k, tau, rep));
  return acc.total();
}

Cplx eval_eisenstein(int k, const SiegelPoint& tau, const CosetWindow& win) {
  if (k <= 2 || k % 2 != 0)
    throw std::domain_error("eval_eisenstein: requires even k > 2");
  return eisenstein_sum(k, tau, win.classes);
}

Cplx skew_eisenstein(int k_plus_1, const SiegelPoint& tau, const CosetWindow& win) {
  if (k_plus_1 % 2 != 1 || k_plus_1 <= 3)
    throw std::domain_error("skew_eisenstein: requires odd weight k + 1 with k > 2");
  ComplexAccumulator acc;
  for (const auto& rep : win.classes) acc.add(skew_term(k_plus_1, tau, rep));
  return acc.total();
}

// ---------------------------------------------------------------------------
// Fourier extraction

namespace {

// per-class data making the truncated sum a cheap function of x at fixed y:
// det(c tau + d) = det(M) + det(c) det(x) + tr(adj(M) c x) with M = d + i c y
struct ClassAtY {
  Cplx detM;
  double detc;
  Cplx q1, q2, q3;  // tr(adj(M) c x) = q1 x1 + q2 u + q3 x2
  bool in_lower;
};

std::vector<ClassAtY> prepare_classes(const CosetWindow& win, const Mat2d& y) {
  std::vector<ClassAtY> out(win.classes.size());
  for (std::size_t idx = 0; idx < win.classes.size(); ++idx) {
    const CosetRep& rep = win.classes[idx];
    Mat2d c = rep.cd(), d = rep.dd();
    Mat2d cy = c * y;
    Mat2c M = complexify(d) + Cplx(0.0, 1.0) * complexify(cy);
    Mat2c P = M.adjugate() * complexify(c);
    out[idx].detM = M.det();
    out[idx].detc = c.det();
    out[idx].q1 = P(0, 0);
    out[idx].q2 = P(0, 1) + P(1, 0);
    out[idx].q3 = P(1, 1);
    out[idx].in_lower = win.in_lower[idx] != 0;
  }
  return out;
}

// values of the truncated sum (without the det(y)^{1/2} prefactor) on the
// 3-torus grid of size N per axis; two accumulations: the full window and the
// lower window. w is linear in x2 along the innermost loop and the power
// w^{-k}/|w| is computed as conj(w)^k / |w|^{2k+1} to avoid complex division.
void x_grid_sums(int k, const std::vector<ClassAtY>& classes, int N,
                 std::vector<Cplx>& full, std::vector<Cplx>& lower) {
  const std::size_t total = std::size_t(N) * N * N;
  full.assign(total, Cplx(0.0));
  lower.assign(total, Cplx(0.0));
  std::vector<double> coord(N);
  for (int a = 0; a < N; ++a) coord[a] = double(a) / N;
  const double invN = 1.0 / N;
  for (const auto& cls : classes) {
    std::size_t ix = 0;
    for (int a = 0; a < N; ++a) {
      double x1 = coord[a];
      Cplx wstep = (cls.q3 + x1 * cls.detc) * invN;
      for (int b = 0; b < N; ++b) {
        double u = coord[b];
        Cplx w = cls.detM + cls.q1 * x1 + cls.q2 * u - u * u * cls.detc;
        for (int c = 0; c < N; ++c, ++ix) {
          double n2 = std::norm(w);
          Cplx num = cpow_int(std::conj(w), k);
          double den = 1.0;
          for (int p = 0; p < k; ++p) den *= n2;
          Cplx term = num / (den * std::sqrt(n2));
          full[ix] += term;
          if (cls.in_lower) lower[ix] += term;
          w += wstep;
        }
      }
    }
  }
}

// trapezoid pairing of grid values with e(-tx); subsample = 2 reads the
// even-index subgrid for the embedded N-point rule
Cplx project_mode(const std::vector<Cplx>& vals, int N, const FourierIndex& t,
                  int subsample) {
  // phases per axis; 2 t12 is integral on the dual lattice but half-integral
  // t12 also works because u has period 1 in the character below
  double t11 = to_double(t.t11), t12 = to_double(t.t12), t22 = to_double(t.t22);
  int M = N / subsample;
  std::vector<Cplx> p1(M), p2(M), p3(M);
  for (int a = 0; a < M; ++a) {
    double x = double(a * subsample) / N;
    p1[a] = std::polar(1.0, -kTwoPi * t11 * x);
    p2[a] = std::polar(1.0, -kTwoPi * 2.0 * t12 * x);
    p3[a] = std::polar(1.0, -kTwoPi * t22 * x);
  }
  ComplexAccumulator acc;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      Cplx pab = p1[a] * p2[b];
      for (int c = 0; c < M; ++c) {
        std::size_t ix = (std::size_t(a) * N + b) * std::size_t(N) * subsample +
                         std::size_t(c) * subsample;
        // index into the full N-grid: ((a*s)*N + b*s)*N + c*s
        ix = ((std::size_t(a) * subsample) * N + std::size_t(b) * subsample) * N +
             std::size_t(c) * subsample;
        acc.add(vals[ix] * pab * p3[c]);
      }
    }
  double scale = 1.0 / double(std::size_t(M) * M * M);
  return acc.total() * scale;
}

}  // namespace

std::vector<FourierValue> fourier_coefficients(int k, const std::vector<FourierIndex>& ts,
                                               const Mat2d& y, int n_quad,
                                               const CosetWindow& win) {
  if (n_quad < 4) throw std::domain_error("fourier_coefficients: N_quad >= 4 required");
  if (k % 2 != 0) throw std::domain_error("fourier_coefficients: k must be even");
  if (!is_positive_definite(y))
    throw std::domain_error("fourier_coefficients: y must be positive definite");
  const int N2 = 2 * n_quad;
  std::vector<Cplx> full, lower;
  auto classes = prepare_classes(win, y);
  x_grid_sums(k, classes, N2, full, lower);
  double pref = std::sqrt(y.det());
  std::vector<FourierValue> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Cplx i2n = project_mode(full, N2, ts[i], 1) * pref;
    Cplx in = project_mode(full, N2, ts[i], 2) * pref;
    Cplx isub = project_mode(lower, N2, ts[i], 1) * pref;
    out[i].value = i2n;
    out[i].delta_quad = i2n - in;
    out[i].delta_trunc = i2n - isub;
  }
  return out;
}

FourierValue fourier_coefficient(int k, const FourierIndex& t, const Mat2d& y, int n_quad,
                                 const CosetWindow& win) {
  return fourier_coefficients(k, {t}, y, n_quad, win)[0];
}

GridFunction CoefficientProfile::as_grid_function() const {
  GridFunction g;
  g.weight = Weight{k, 0};
  g.grid = grid;
  g.t = t.matrix();
  g.margin = 0;
  g.values = samples;
  double scale = 0;
  for (const auto& v : samples) scale = std::max(scale, std::abs(v));
  g.err = 1e-14 * scale;  // roundoff floor; tabulation errors ride the fields
  return g;
}

GridFunction CoefficientProfile::quad_field() const {
  GridFunction g = as_grid_function();
  g.values = delta_quad;
  g.err = 0.0;
  return g;
}

GridFunction CoefficientProfile::trunc_field() const {
  GridFunction g = as_grid_function();
  g.values = delta_trunc;
  g.err = 0.0;
  return g;
}

std::vector<CoefficientProfile> build_profiles(int k, const std::vector<FourierIndex>& ts,
                                               const YGrid& grid, int n_quad,
                                               const CosetWindow& win, int jobs) {
  if (grid.spd_margin() <= 0)
    throw std::domain_error("build_profiles: grid touches the cone boundary");
  std::vector<CoefficientProfile> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out[i].k = k;
    out[i].t = ts[i];
    out[i].grid = grid;
    out[i].n_quad = n_quad;
    out[i].height_bound = win.height;
    out[i].samples.resize(grid.size());
    out[i].delta_quad.resize(grid.size());
    out[i].delta_trunc.resize(grid.size());
    out[i].errors.resize(grid.size());
  }
  parallel_for(grid.size(), jobs, [&](std::size_t node) {
    int nn = grid.n;
    int i = int(node / (std::size_t(nn) * nn));
    int j = int((node / nn) % nn);
    int m = int(node % nn);
    Mat2d y = grid.node(i, j, m);
    auto vals = fourier_coefficients(k, ts, y, n_quad, win);
    for (std::size_t q = 0; q < ts.size(); ++q) {
      out[q].samples[node] = vals[q].value;
      out[q].delta_quad[node] = vals[q].delta_quad;
      out[q].delta_trunc[node] = vals[q].delta_trunc;
      out[q].errors[node] = vals[q].budget();
    }
  }, 1);
  for (auto& p : out) {
    p.max_error = 0;
    for (double e : p.errors) p.max_error = std::max(p.max_error, e);
  }
  return out;
}

CoefficientProfile build_profile(int k, const FourierIndex& t, const YGrid& grid,
                                 int n_quad, const CosetWindow& win, int jobs) {
  return build_profiles(k, {t}, grid, n_quad, win, jobs)[0];
}

double LiftedKernel::budget(double safety) const {
  double d = 0;
  for (auto [i, j, m] : fn.interior_nodes()) {
    std::size_t node = fn.grid.index(i, j, m);
    for (int c = 0; c < fn.dim(); ++c)
      d = std::max(d, std::abs(dq.value(node, c)) + std::abs(dt.value(node, c)));
  }
  return fn.err + safety * d;
}

LiftedKernel lift_kernel(const CoefficientProfile& profile, int level, int rich_levels) {
  if (level < 0 || level > profile.k)
    throw std::domain_error("lift_kernel: level must lie in [0, k/2] of the lifted weight");
  LiftedKernel kern;
  kern.k_sk = 2 * profile.k;
  kern.t = profile.t;
  kern.level = level;
  kern.fn = profile.as_grid_function();
  kern.dq = profile.quad_field();
  kern.dt = profile.trunc_field();
  for (int j = 0; j < level; ++j) {
    kern.fn = apply_grid_projected(kern.fn, Dir::L, Comp::plus, rich_levels);
    kern.dq = apply_grid_projected(kern.dq, Dir::L, Comp::plus, rich_levels);
    kern.dt = apply_grid_projected(kern.dt, Dir::L, Comp::plus, rich_levels);
  }
  return kern;
}

KernelOpCheck apply_kernel_op(const LiftedKernel& kern, Dir dir, Comp comp,
                              int rich_levels, double safety) {
  KernelOpCheck chk;
  chk.value = apply_grid_projected(kern.fn, dir, comp, rich_levels);
  chk.dq = apply_grid_projected(kern.dq, dir, comp, rich_levels);
  chk.dt = apply_grid_projected(kern.dt, dir, comp, rich_levels);
  for (auto [i, j, m] : chk.value.interior_nodes()) {
    std::size_t node = chk.value.grid.index(i, j, m);
    double res = 0, dev = 0;
    for (int c = 0; c < chk.value.dim(); ++c) {
      res = std::max(res, std::abs(chk.value.value(node, c)));
      dev = std::max(dev, std::abs(chk.dq.value(node, c)) + std::abs(chk.dt.value(node, c)));
    }
    double bud = chk.value.err + safety * dev;
    chk.residual_max = std::max(chk.residual_max, res);
    chk.budget_max = std::max(chk.budget_max, bud);
    chk.worst_ratio = std::max(chk.worst_ratio, res / std::max(bud, 1e-300));
  }
  return chk;
}

double bessel_reference(int k, const FourierIndex& t, const Mat2d& y) {
  if (k < 2) throw std::domain_error("bessel_reference: k/2 >= 1 required");
  Mat2d tm = t.matrix();
  double tr = (tm * y).trace();
  double w = tr * tr - tm.det() * y.det();
  if (w <= 0) throw std::domain_error("bessel_reference: argument must be positive");
  double nu = k / 2.0;
  return std::pow(y.det(), (k + 2) / 4.0) * bessel_k(nu, w) / std::pow(w, k / 4.0);
}

ModularMap assemble_fstar(const CoefficientList& coeffs,
                          const std::vector<LiftedKernel>& kernels, int rich_levels) {
  if (kernels.empty()) throw std::invalid_argument("assemble_fstar: no kernel basis");
  Weight w = kernels.front().fn.weight;
  std::vector<std::pair<Cplx, ModularMap>> parts;
  for (const auto& [t, c] : coeffs.entries) {
    if (t.signature() != FourierIndex::Signature::indefinite)
      throw std::domain_error("assemble_fstar: coefficient at non-indefinite index " +
                              t.str());
    const LiftedKernel* match = nullptr;
    for (const auto& kern : kernels)
      if (kern.t == t) match = &kern;
    if (!match)
      throw std::invalid_argument("assemble_fstar: no kernel tabulated for index " +
                                  t.str());
    parts.emplace_back(c, grid_map(match->fn, rich_levels));
  }
  return ModularMap::combination(w, std::move(parts));
}

namespace {

// dense complex least squares via normal equations, with a pivot-ratio
// condition estimate
std::vector<Cplx> solve_least_squares(const std::vector<CVec>& rows, const CVec& rhs,
                                      double& condition) {
  const std::size_t m = rows.size(), n = rows.empty() ? 0 : rows[0].size();
  Matrix<Cplx> a(n, n);
  CVec b(n, Cplx(0.0));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        a(i, j) += std::conj(rows[r][i]) * rows[r][j];
      b[i] += std::conj(rows[r][i]) * rhs[r];
    }
  }
  // gaussian elimination with partial pivoting
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double pmax = 0, pmin = 1e300;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
    if (piv != col) std::swap(b[col], b[piv]);
    double p = std::abs(a(col, col));
    pmax = std::max(pmax, p);
    pmin = std::min(pmin, p);
    if (p == 0.0) throw std::domain_error("decompose: singular normal equations");
    for (std::size_t r = col + 1; r < n; ++r) {
      Cplx f = a(r, col) / a(col, col);
      if (f == Cplx(0.0)) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  condition = pmin > 0 ? pmax / pmin : 1e300;
  CVec x(n, Cplx(0.0));
  for (std::size_t i = n; i-- > 0;) {
    Cplx s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace

Decomposition decompose(const ModularMap& f, int k,
                        const std::vector<LiftedKernel>& low_kernels,
                        const std::vector<LiftedKernel>& high_kernels,
                        const std::vector<SiegelPoint>& samples, int rich_levels) {
  if (k < 4 || k % 4 != 0)
    throw std::domain_error("decompose: k must be a positive multiple of 4");
  if (f.weight() != Weight{2 - k / 2, k - 2})
    throw std::invalid_argument("decompose: map weight must be det^{2-k/2} sym^{k-2}");
  if (high_kernels.empty() || samples.empty())
    throw std::invalid_argument("decompose: need kernels and sample points");

  ModularMap lf = projected_op(f, Dir::L, Comp::plus);
  std::vector<ModularMap> basis;
  basis.reserve(high_kernels.size());
  for (const auto& kern : high_kernels) basis.push_back(grid_map(kern.fn, rich_levels));

  std::vector<CVec> rows;
  CVec rhs;
  for (const auto& tau : samples) {
    CVec target = lf.eval(tau).coeffs;
    std::vector<CVec> bvals;
    for (const auto& bmap : basis) bvals.push_back(bmap.eval(tau).coeffs);
    for (std::size_t compi = 0; compi < target.size(); ++compi) {
      CVec row(basis.size());
      for (std::size_t bi = 0; bi < basis.size(); ++bi) row[bi] = bvals[bi][compi];
      rows.push_back(std::move(row));
      rhs.push_back(target[compi]);
    }
  }

  Decomposition dec;
  std::vector<Cplx> c = solve_least_squares(rows, rhs, dec.condition);
  if (dec.condition > 1e12) {
    std::ostringstream os;
    os << "decompose: coefficient recovery ill-conditioned (pivot ratio "
       << dec.condition << ")";
    throw std::domain_error(os.str());
  }
  double misfit = 0, scale = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Cplx fit = 0;
    for (std::size_t j = 0; j < c.size(); ++j) fit += rows[r][j] * c[j];
    misfit = std::max(misfit, std::abs(fit - rhs[r]));
    scale = std::max(scale, std::abs(rhs[r]));
  }
  dec.residual = scale > 0 ? misfit / scale : misfit;

  for (std::size_t i = 0; i < high_kernels.size(); ++i)
    dec.recovered.entries.emplace_back(high_kernels[i].t, c[i]);
  dec.f_minus = assemble_fstar(dec.recovered, low_kernels, rich_levels);
  dec.f_plus = f - dec.f_minus;
  return dec;
}

}  // namespace siegel
