#include "siegel/modular_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

namespace siegel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double pow_int(double base, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= base;
  return r;
}

}  // namespace

Cplx richardson_derivative(const std::function<Cplx(double)>& sample, double h,
                           int levels, double* err_est) {
  if (levels < 1) throw std::invalid_argument("richardson_derivative: levels >= 1");
  std::vector<Cplx> row(levels);
  for (int j = 0; j < levels; ++j) {
    double hj = h / double(1 << j);
    if (hj < 1e-300) throw std::domain_error("richardson_derivative: step underflow");
    row[j] = (sample(hj) - sample(-hj)) / (2.0 * hj);
  }
  // Richardson table in place; row[j] holds T_{j, m} after sweep m
  Cplx prev_best = row[levels - 1];
  for (int m = 1; m < levels; ++m) {
    double f = double(1 << (2 * m));  // 4^m
    for (int j = levels - 1; j >= m; --j) row[j] = (f * row[j] - row[j - 1]) / (f - 1.0);
    if (m == levels - 2 && levels >= 2) prev_best = row[levels - 1];
  }
  if (err_est) {
    *err_est = levels >= 2 ? std::abs(row[levels - 1] - prev_best) : std::abs(row[0]) * 1e-8;
  }
  return row[levels - 1];
}

// ---------------------------------------------------------------------------
// symbolic term machinery

Cplx eval_terms(const TermList& terms, const SiegelPoint& pt) {
  double x1 = pt.x1(), uu = pt.u(), x2 = pt.x2();
  double y1 = pt.y1(), vv = pt.v(), y2 = pt.y2();
  double dety = pt.y.det();
  Cplx total = 0.0;
  for (const auto& t : terms) {
    double mag = pow_int(x1, t.xpow[0]) * pow_int(uu, t.xpow[1]) * pow_int(x2, t.xpow[2]) *
                 pow_int(y1, t.ypow[0]) * pow_int(vv, t.ypow[1]) * pow_int(y2, t.ypow[2]);
    if (t.det_half != 0) mag *= std::pow(dety, 0.5 * t.det_half);
    Cplx val = t.coeff * mag;
    double tx = t.t(0, 0) * x1 + 2.0 * t.t(0, 1) * uu + t.t(1, 1) * x2;
    if (tx != 0.0) val *= std::polar(1.0, kTwoPi * tx);
    double sy = t.s(0, 0) * y1 + 2.0 * t.s(0, 1) * vv + t.s(1, 1) * y2;
    if (sy != 0.0) val *= std::exp(-kTwoPi * sy);
    total += val;
  }
  return total;
}

TermList dx_terms(const TermList& terms, int axis) {
  TermList out;
  for (const auto& t : terms) {
    if (t.xpow[axis] > 0) {
      SymbolicTerm d = t;
      d.coeff *= double(t.xpow[axis]);
      d.xpow[axis] -= 1;
      out.push_back(d);
    }
    double mult = axis == 0 ? t.t(0, 0) : (axis == 1 ? 2.0 * t.t(0, 1) : t.t(1, 1));
    if (mult != 0.0) {
      SymbolicTerm d = t;
      d.coeff *= Cplx(0.0, kTwoPi * mult);
      out.push_back(d);
    }
  }
  return simplify(std::move(out));
}

TermList dy_terms(const TermList& terms, int axis) {
  TermList out;
  for (const auto& t : terms) {
    if (t.ypow[axis] > 0) {
      SymbolicTerm d = t;
      d.coeff *= double(t.ypow[axis]);
      d.ypow[axis] -= 1;
      out.push_back(d);
    }
    if (t.det_half != 0) {
      // d det / d(y1, v, y2) = (y2, -2v, y1)
      SymbolicTerm d = t;
      d.coeff *= 0.5 * double(t.det_half);
      d.det_half -= 2;
      if (axis == 0)
        d.ypow[2] += 1;
      else if (axis == 1) {
        d.coeff *= -2.0;
        d.ypow[1] += 1;
      } else
        d.ypow[0] += 1;
      out.push_back(d);
    }
    double mult = axis == 0 ? t.s(0, 0) : (axis == 1 ? 2.0 * t.s(0, 1) : t.s(1, 1));
    if (mult != 0.0) {
      SymbolicTerm d = t;
      d.coeff *= -kTwoPi * mult;
      out.push_back(d);
    }
  }
  return simplify(std::move(out));
}

TermList scale_terms(const TermList& terms, Cplx c) {
  TermList out = terms;
  for (auto& t : out) t.coeff *= c;
  return out;
}

TermList mul_y_monomial(const TermList& terms, int axis) {
  TermList out = terms;
  for (auto& t : out) t.ypow[axis] += 1;
  return out;
}

TermList mul_det_power(const TermList& terms, int half) {
  TermList out = terms;
  for (auto& t : out) t.det_half += half;
  return out;
}

TermList add_terms(TermList a, const TermList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return simplify(std::move(a));
}

namespace {

struct TermKey {
  std::array<int, 3> xpow, ypow;
  int det_half;
  std::array<double, 4> t, s;

  bool operator<(const TermKey& o) const {
    if (xpow != o.xpow) return xpow < o.xpow;
    if (ypow != o.ypow) return ypow < o.ypow;
    if (det_half != o.det_half) return det_half < o.det_half;
    if (t != o.t) return t < o.t;
    return s < o.s;
  }
};

TermKey key_of(const SymbolicTerm& t) {
  return {t.xpow, t.ypow, t.det_half, t.t.e, t.s.e};
}

}  // namespace

TermList simplify(TermList terms) {
  std::map<TermKey, SymbolicTerm> merged;
  for (auto& t : terms) {
    auto k = key_of(t);
    auto it = merged.find(k);
    if (it == merged.end())
      merged.emplace(k, t);
    else
      it->second.coeff += t.coeff;
  }
  TermList out;
  out.reserve(merged.size());
  for (auto& [k, t] : merged)
    if (t.coeff != 0.0) out.push_back(t);
  return out;
}

namespace {

// sparse polynomial over the three symmetric-matrix coordinates
using Poly3 = std::map<std::array<int, 3>, double>;

Poly3 poly_mul(const Poly3& a, const Poly3& b) {
  Poly3 r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b)
      r[{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}] += ca * cb;
  return r;
}

Poly3 poly_pow(const Poly3& p, int n) {
  Poly3 r = {{{0, 0, 0}, 1.0}};
  for (int i = 0; i < n; ++i) r = poly_mul(r, p);
  return r;
}

// expansion of a monomial (m1^p1 m2^p2 m3^p3) after the linear substitution
// m_i -> sum lin[i][j] m_j
Poly3 substitute_monomial(const std::array<int, 3>& pows,
                          const std::array<std::array<double, 3>, 3>& lin) {
  Poly3 r = {{{0, 0, 0}, 1.0}};
  for (int i = 0; i < 3; ++i) {
    if (pows[i] == 0) continue;
    Poly3 l;
    for (int j = 0; j < 3; ++j)
      if (lin[i][j] != 0.0) l[{j == 0 ? 1 : 0, j == 1 ? 1 : 0, j == 2 ? 1 : 0}] = lin[i][j];
    r = poly_mul(r, poly_pow(l, pows[i]));
  }
  return r;
}

}  // namespace

TermList translate_terms(const TermList& terms, const Mat2d& b) {
  TermList out;
  double b1 = b(0, 0), bu = b(0, 1), b2 = b(1, 1);
  for (const auto& t : terms) {
    double tb = t.t(0, 0) * b1 + 2.0 * t.t(0, 1) * bu + t.t(1, 1) * b2;
    Cplx phase = tb != 0.0 ? std::polar(1.0, kTwoPi * tb) : Cplx(1.0, 0.0);
    // binomial expansion of each shifted coordinate
    std::array<double, 3> shift = {b1, bu, b2};
    std::vector<std::pair<std::array<int, 3>, double>> expansion = {{{0, 0, 0}, 1.0}};
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<std::pair<std::array<int, 3>, double>> next;
      for (const auto& [pows, c] : expansion) {
        int n = t.xpow[axis];
        double bc = 1.0;
        for (int i = n; i >= 0; --i) {
          // coefficient C(n, i) shift^{n-i} x^i
          auto p = pows;
          p[axis] = i;
          double cc = c * bc * pow_int(shift[axis], n - i);
          if (cc != 0.0) next.push_back({p, cc});
          bc = bc * i / double(n - i + 1);
        }
      }
      expansion = std::move(next);
    }
    for (const auto& [pows, c] : expansion) {
      SymbolicTerm nt = t;
      nt.coeff *= phase * c;
      nt.xpow = pows;
      out.push_back(nt);
    }
  }
  return simplify(std::move(out));
}

TermList gl_substitute_terms(const TermList& terms, const Mat2d& u) {
  // tau -> u tau u^T on all factors
  double a = u(0, 0), bb = u(0, 1), c = u(1, 0), d = u(1, 1);
  std::array<std::array<double, 3>, 3> lin = {{
      {a * a, 2 * a * bb, bb * bb},          // (u m u^T)_11
      {a * c, a * d + bb * c, bb * d},       // (u m u^T)_12
      {c * c, 2 * c * d, d * d},             // (u m u^T)_22
  }};
  double detu = u.det();
  double absdet = std::fabs(detu);
  Mat2d ut = u.transposed();
  TermList out;
  for (const auto& t : terms) {
    Mat2d tprime = ut * t.t * u;
    Mat2d sprime = ut * t.s * u;
    Poly3 xe = substitute_monomial(t.xpow, lin);
    Poly3 ye = substitute_monomial(t.ypow, lin);
    for (const auto& [xp, xc] : xe)
      for (const auto& [yp, yc] : ye) {
        SymbolicTerm nt;
        nt.coeff = t.coeff * xc * yc * std::pow(absdet, t.det_half);
        nt.xpow = xp;
        nt.ypow = yp;
        nt.det_half = t.det_half;
        nt.t = tprime;
        nt.s = sprime;
        out.push_back(nt);
      }
  }
  return simplify(std::move(out));
}

TermList term_det_y_power(int half) {
  SymbolicTerm t;
  t.det_half = half;
  return {t};
}

TermList term_exponential(const Mat2d& t, const Mat2d& s) {
  SymbolicTerm term;
  term.t = t;
  term.s = s;
  return {term};
}

TermList term_e_tau(const Mat2d& t) { return term_exponential(t, t); }

// ---------------------------------------------------------------------------
// map cores

namespace {

class SymbolicCore final : public MapCore {
 public:
  explicit SymbolicCore(std::vector<TermList> comps, StepPolicy pol = {})
      : comps_(std::move(comps)), pol_(pol) {}

  int dim() const override { return int(comps_.size()); }

  CVec eval(const SiegelPoint& pt) const override {
    CVec out(comps_.size());
    for (std::size_t i = 0; i < comps_.size(); ++i) out[i] = eval_terms(comps_[i], pt);
    return out;
  }

  void derivs(const SiegelPoint& pt, std::array<CVec, 3>& dxo,
              std::array<CVec, 3>& dyo) const override {
    for (int axis = 0; axis < 3; ++axis) {
      dxo[axis].resize(comps_.size());
      dyo[axis].resize(comps_.size());
      for (std::size_t i = 0; i < comps_.size(); ++i) {
        dxo[axis][i] = eval_terms(dx_terms(comps_[i], axis), pt);
        dyo[axis][i] = eval_terms(dy_terms(comps_[i], axis), pt);
      }
    }
  }

  MapCorePtr apply_projected(const Weight& w, Dir dir, Comp comp) const override;

  const std::vector<TermList>* symbolic_terms() const override { return &comps_; }
  StepPolicy policy() const override { return pol_; }

 private:
  std::vector<TermList> comps_;
  StepPolicy pol_;
};

class SumCore final : public MapCore {
 public:
  SumCore(int dim, std::vector<std::pair<Cplx, MapCorePtr>> parts)
      : dim_(dim), parts_(std::move(parts)) {}

  int dim() const override { return dim_; }

  CVec eval(const SiegelPoint& pt) const override {
    CVec out(dim_, Cplx(0.0));
    for (const auto& [c, core] : parts_) {
      CVec v = core->eval(pt);
      for (int i = 0; i < dim_; ++i) out[i] += c * v[i];
    }
    return out;
  }

  void derivs(const SiegelPoint& pt, std::array<CVec, 3>& dxo,
              std::array<CVec, 3>& dyo) const override {
    for (int a = 0; a < 3; ++a) {
      dxo[a].assign(dim_, Cplx(0.0));
      dyo[a].assign(dim_, Cplx(0.0));
    }
    std::array<CVec, 3> dx, dy;
    for (const auto& [c, core] : parts_) {
      core->derivs(pt, dx, dy);
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < dim_; ++i) {
          dxo[a][i] += c * dx[a][i];
          dyo[a][i] += c * dy[a][i];
        }
    }
  }

  MapCorePtr apply_projected(const Weight& w, Dir dir, Comp comp) const override {
    std::vector<std::pair<Cplx, MapCorePtr>> next;
    next.reserve(parts_.size());
    int ndim = -1;
    for (const auto& [c, core] : parts_) {
      MapCorePtr p = core->apply_projected(w, dir, comp);
      if (!p) return nullptr;
      ndim = p->dim();
      next.emplace_back(c, std::move(p));
    }
    return std::make_shared<SumCore>(ndim, std::move(next));
  }

  StepPolicy policy() const override {
    return parts_.empty() ? StepPolicy{} : parts_.front().second->policy();
  }

  double error_budget() const override {
    double e = 0;
    for (const auto& [c, core] : parts_) e += std::abs(c) * core->error_budget();
    return e;
  }

 private:
  int dim_;
  std::vector<std::pair<Cplx, MapCorePtr>> parts_;
};

class GenericCore final : public MapCore {
 public:
  GenericCore(int dim, std::function<CVec(const SiegelPoint&)> f, StepPolicy pol)
      : dim_(dim), f_(std::move(f)), pol_(pol) {}

  int dim() const override { return dim_; }
  CVec eval(const SiegelPoint& pt) const override { return f_(pt); }
  StepPolicy policy() const override { return pol_; }

  void derivs(const SiegelPoint& pt, std::array<CVec, 3>& dxo,
              std::array<CVec, 3>& dyo) const override {
    double yscale = std::max(1.0, max_abs(pt.y));
    double h = pol_.h0 * yscale;
    // keep finite-difference excursions inside the positive cone
    double safe = 0.2 * min_eigenvalue(pt.y);
    if (h > safe) h = safe;
    if (h < 1e-14)
      throw std::domain_error("numeric derivative: step underflow near the cone boundary");
    for (int axis = 0; axis < 3; ++axis) {
      dxo[axis].resize(dim_);
      dyo[axis].resize(dim_);
    }
    for (int comp = 0; comp < dim_; ++comp) {
      for (int axis = 0; axis < 3; ++axis) {
        auto sx = [&](double o) {
          SiegelPoint q = pt;
          Mat2d xo = q.x;
          if (axis == 0) xo(0, 0) += o;
          else if (axis == 2) xo(1, 1) += o;
          else {
            xo(0, 1) += o;
            xo(1, 0) += o;
          }
          return f_(SiegelPoint(xo, q.y))[comp];
        };
        auto sy = [&](double o) {
          SiegelPoint q = pt;
          Mat2d yo = q.y;
          if (axis == 0) yo(0, 0) += o;
          else if (axis == 2) yo(1, 1) += o;
          else {
            yo(0, 1) += o;
            yo(1, 0) += o;
          }
          return f_(SiegelPoint(q.x, yo))[comp];
        };
        dxo[axis][comp] = richardson_derivative(sx, pol_.h0, pol_.levels, nullptr);
        dyo[axis][comp] = richardson_derivative(sy, h, pol_.levels, nullptr);
      }
    }
  }

 private:
  int dim_;
  std::function<CVec(const SiegelPoint&)> f_;
  StepPolicy pol_;
};

}  // namespace

// assemble packed L (dual sym^2) from first derivatives and the value point
CVec assemble_lower(const SiegelPoint& pt, const std::array<CVec, 3>& dx,
                    const std::array<CVec, 3>& dy) {
  const std::size_t n = dx[0].size();
  const Cplx I(0.0, 1.0);
  double y1 = pt.y1(), vv = pt.v(), y2 = pt.y2();
  CVec out(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Cplx e11 = 0.5 * (dx[0][i] + I * dy[0][i]);
    Cplx e12 = 0.25 * (dx[1][i] + I * dy[1][i]);
    Cplx e22 = 0.5 * (dx[2][i] + I * dy[2][i]);
    // y E y
    Cplx t11 = e11 * y1 + e12 * vv, t12 = e11 * vv + e12 * y2;
    Cplx t21 = e12 * y1 + e22 * vv, t22 = e12 * vv + e22 * y2;
    Cplx m11 = y1 * t11 + vv * t21;
    Cplx m12 = y1 * t12 + vv * t22;
    Cplx m22 = vv * t12 + y2 * t22;
    out[i] = m11;
    out[n + i] = 2.0 * m12;
    out[2 * n + i] = m22;
  }
  return out;
}

CVec assemble_raise(const SiegelPoint& pt, const Weight& w, const CVec& fval,
                    const std::array<CVec, 3>& dx, const std::array<CVec, 3>& dy,
                    const Matrix<Cplx>& tmat) {
  const std::size_t n = fval.size();
  const Cplx I(0.0, 1.0);
  double dety = pt.y.det();
  double b11 = pt.y2() / dety, b12 = -pt.v() / dety, b22 = pt.y1() / dety;
  CVec dpart(3 * n), bpart(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    Cplx a11 = 0.5 * (dx[0][i] - I * dy[0][i]);
    Cplx a12 = 0.25 * (dx[1][i] - I * dy[1][i]);
    Cplx a22 = 0.5 * (dx[2][i] - I * dy[2][i]);
    dpart[i] = a11;
    dpart[n + i] = 2.0 * a12;
    dpart[2 * n + i] = a22;
    bpart[i] = b11 * fval[i];
    bpart[n + i] = 2.0 * b12 * fval[i];
    bpart[2 * n + i] = b22 * fval[i];
  }
  CVec out(3 * n);
  Cplx ck = -I * (0.5 * w.k);
  for (std::size_t i = 0; i < 3 * n; ++i) out[i] = dpart[i] + ck * bpart[i];
  if (w.l > 0) {
    CVec tb = tmat * bpart;
    Cplx cl = -I * (0.5 * w.l);
    for (std::size_t i = 0; i < 3 * n; ++i) out[i] += cl * tb[i];
  }
  return out;
}

namespace {

std::vector<TermList> lower_symbolic(const std::vector<TermList>& comps) {
  const std::size_t n = comps.size();
  const Cplx I(0.0, 1.0);
  std::vector<TermList> m11(n), m12(n), m22(n);
  for (std::size_t i = 0; i < n; ++i) {
    TermList e11 = add_terms(scale_terms(dx_terms(comps[i], 0), 0.5),
                             scale_terms(dy_terms(comps[i], 0), 0.5 * I));
    TermList e12 = add_terms(scale_terms(dx_terms(comps[i], 1), 0.25),
                             scale_terms(dy_terms(comps[i], 1), 0.25 * I));
    TermList e22 = add_terms(scale_terms(dx_terms(comps[i], 2), 0.5),
                             scale_terms(dy_terms(comps[i], 2), 0.5 * I));
    // y E y with y = [[y1, v], [v, y2]]
    auto mul2 = [](const TermList& l, int ax1, int ax2) {
      return mul_y_monomial(mul_y_monomial(l, ax1), ax2);
    };
    // M11 = y1 y1 E11 + 2 y1 v E12 + v v E22
    m11[i] = add_terms(add_terms(mul2(e11, 0, 0), scale_terms(mul2(e12, 0, 1), 2.0)),
                       mul2(e22, 1, 1));
    // M12 = y1 v E11 + (y1 y2 + v v) E12 + v y2 E22
    m12[i] = add_terms(
        add_terms(mul2(e11, 0, 1), add_terms(mul2(e12, 0, 2), mul2(e12, 1, 1))),
        mul2(e22, 1, 2));
    // M22 = v v E11 + 2 v y2 E12 + y2 y2 E22
    m22[i] = add_terms(add_terms(mul2(e11, 1, 1), scale_terms(mul2(e12, 1, 2), 2.0)),
                       mul2(e22, 2, 2));
  }
  std::vector<TermList> out(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = m11[i];
    out[n + i] = scale_terms(m12[i], 2.0);
    out[2 * n + i] = m22[i];
  }
  return out;
}

std::vector<TermList> raise_symbolic(const std::vector<TermList>& comps, const Weight& w) {
  const std::size_t n = comps.size();
  const Cplx I(0.0, 1.0);
  std::vector<TermList> out(3 * n);
  // derivative part
  for (std::size_t i = 0; i < n; ++i) {
    TermList a11 = add_terms(scale_terms(dx_terms(comps[i], 0), 0.5),
                             scale_terms(dy_terms(comps[i], 0), -0.5 * I));
    TermList a12 = add_terms(scale_terms(dx_terms(comps[i], 1), 0.25),
                             scale_terms(dy_terms(comps[i], 1), -0.25 * I));
    TermList a22 = add_terms(scale_terms(dx_terms(comps[i], 2), 0.5),
                             scale_terms(dy_terms(comps[i], 2), -0.5 * I));
    out[i] = a11;
    out[n + i] = scale_terms(a12, 2.0);
    out[2 * n + i] = a22;
  }
  // y^{-1} (x) f, packed: entries of y^{-1} are adj(y)/det(y)
  std::vector<TermList> bpart(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    bpart[i] = mul_det_power(mul_y_monomial(comps[i], 2), -2);  // y2/det
    bpart[n + i] = scale_terms(mul_det_power(mul_y_monomial(comps[i], 1), -2), -2.0);
    bpart[2 * n + i] = mul_det_power(mul_y_monomial(comps[i], 0), -2);  // y1/det
  }
  Cplx ck = -I * (0.5 * w.k);
  for (std::size_t i = 0; i < 3 * n; ++i)
    out[i] = add_terms(out[i], scale_terms(bpart[i], ck));
  if (w.l > 0) {
    Matrix<Rat> tq = symmetrize_matrix(w.l);
    Cplx cl = -I * (0.5 * w.l);
    for (std::size_t i = 0; i < 3 * n; ++i) {
      TermList acc;
      for (std::size_t j = 0; j < 3 * n; ++j) {
        if (tq(i, j) == 0) continue;
        acc = add_terms(std::move(acc), scale_terms(bpart[j], cl * to_double(tq(i, j))));
      }
      out[i] = add_terms(out[i], acc);
    }
  }
  return out;
}

std::vector<TermList> project_symbolic(const std::vector<TermList>& tensor,
                                       const Matrix<Rat>& proj) {
  std::vector<TermList> out(proj.rows());
  for (std::size_t i = 0; i < proj.rows(); ++i) {
    TermList acc;
    for (std::size_t j = 0; j < proj.cols(); ++j) {
      if (proj(i, j) == 0) continue;
      acc = add_terms(std::move(acc), scale_terms(tensor[j], to_double(proj(i, j))));
    }
    out[i] = std::move(acc);
  }
  return out;
}

MapCorePtr SymbolicCore::apply_projected(const Weight& w, Dir dir, Comp comp) const {
  ProjectionTable table(w);
  Weight tw = table.target(dir, comp);
  if (!table.present(comp))
    return std::make_shared<SymbolicCore>(std::vector<TermList>(tw.dim()), pol_);
  std::vector<TermList> tensor =
      dir == Dir::L ? lower_symbolic(comps_) : raise_symbolic(comps_, w);
  return std::make_shared<SymbolicCore>(
      project_symbolic(tensor, table.projection_q(dir, comp)), pol_);
}

}  // namespace

// ---------------------------------------------------------------------------
// ModularMap

ModularMap::ModularMap(Weight w, MapCorePtr core) : weight_(w), core_(std::move(core)) {
  if (core_ && core_->dim() != weight_.dim())
    throw std::invalid_argument("ModularMap: core dimension does not match weight");
}

ModularMap ModularMap::symbolic(Weight w, std::vector<TermList> comps, StepPolicy pol) {
  if (int(comps.size()) != w.dim())
    throw std::invalid_argument("ModularMap::symbolic: component count mismatch");
  return ModularMap(w, std::make_shared<SymbolicCore>(std::move(comps), pol));
}

ModularMap ModularMap::symbolic_scalar(Weight w, TermList terms) {
  if (w.dim() != 1)
    throw std::invalid_argument("ModularMap::symbolic_scalar: weight is not scalar");
  std::vector<TermList> comps(1);
  comps[0] = std::move(terms);
  return symbolic(w, std::move(comps));
}

ModularMap ModularMap::numeric(Weight w, std::function<CVec(const SiegelPoint&)> f,
                               StepPolicy pol) {
  return ModularMap(w, std::make_shared<GenericCore>(w.dim(), std::move(f), pol));
}

RepVector ModularMap::eval(const SiegelPoint& pt) const {
  if (!core_) throw std::logic_error("ModularMap: empty map");
  return RepVector(weight_, core_->eval(pt));
}

ModularMap ModularMap::operator+(const ModularMap& o) const {
  if (weight_ != o.weight_) throw std::invalid_argument("ModularMap sum: weight mismatch");
  auto a = core_, b = o.core_;
  if (const auto* ta = a->symbolic_terms()) {
    if (const auto* tb = b->symbolic_terms()) {
      std::vector<TermList> comps(ta->size());
      for (std::size_t i = 0; i < ta->size(); ++i) comps[i] = add_terms((*ta)[i], (*tb)[i]);
      return symbolic(weight_, std::move(comps));
    }
  }
  std::vector<std::pair<Cplx, MapCorePtr>> parts = {{Cplx(1.0), a}, {Cplx(1.0), b}};
  return ModularMap(weight_, std::make_shared<SumCore>(weight_.dim(), std::move(parts)));
}

ModularMap ModularMap::operator-(const ModularMap& o) const {
  if (weight_ != o.weight_) throw std::invalid_argument("ModularMap diff: weight mismatch");
  std::vector<std::pair<Cplx, MapCorePtr>> parts = {{Cplx(1.0), core_},
                                                    {Cplx(-1.0), o.core_}};
  return ModularMap(weight_, std::make_shared<SumCore>(weight_.dim(), std::move(parts)));
}

ModularMap ModularMap::scaled(Cplx c) const {
  auto a = core_;
  if (const auto* ta = a->symbolic_terms()) {
    std::vector<TermList> comps(ta->size());
    for (std::size_t i = 0; i < ta->size(); ++i) comps[i] = scale_terms((*ta)[i], c);
    return symbolic(weight_, std::move(comps));
  }
  std::vector<std::pair<Cplx, MapCorePtr>> parts = {{c, a}};
  return ModularMap(weight_, std::make_shared<SumCore>(weight_.dim(), std::move(parts)));
}

ModularMap ModularMap::combination(Weight w,
                                   std::vector<std::pair<Cplx, ModularMap>> parts) {
  std::vector<std::pair<Cplx, MapCorePtr>> cores;
  cores.reserve(parts.size());
  for (auto& [c, m] : parts) {
    if (m.weight() != w)
      throw std::invalid_argument("ModularMap::combination: weight mismatch");
    cores.emplace_back(c, m.core_ptr());
  }
  return ModularMap(w, std::make_shared<SumCore>(w.dim(), std::move(cores)));
}

// ---------------------------------------------------------------------------
// operators

TensorField lower(const ModularMap& f) {
  TensorField out;
  out.sigma = f.weight();
  out.model = Sym2Model::dual;
  auto core = f.core_ptr();
  if (const auto* terms = core->symbolic_terms()) {
    out.terms = lower_symbolic(*terms);
    auto lists = std::make_shared<std::vector<TermList>>(out.terms);
    out.eval = [lists](const SiegelPoint& pt) {
      CVec v(lists->size());
      for (std::size_t i = 0; i < lists->size(); ++i) v[i] = eval_terms((*lists)[i], pt);
      return v;
    };
  } else {
    out.eval = [core](const SiegelPoint& pt) {
      std::array<CVec, 3> dx, dy;
      core->derivs(pt, dx, dy);
      return assemble_lower(pt, dx, dy);
    };
  }
  return out;
}

TensorField raise(const ModularMap& f) {
  TensorField out;
  out.sigma = f.weight();
  out.model = Sym2Model::poly;
  auto core = f.core_ptr();
  Weight w = f.weight();
  if (const auto* terms = core->symbolic_terms()) {
    out.terms = raise_symbolic(*terms, w);
    auto lists = std::make_shared<std::vector<TermList>>(out.terms);
    out.eval = [lists](const SiegelPoint& pt) {
      CVec v(lists->size());
      for (std::size_t i = 0; i < lists->size(); ++i) v[i] = eval_terms((*lists)[i], pt);
      return v;
    };
  } else {
    auto tmat = std::make_shared<Matrix<Cplx>>(convert_matrix<Rat, Cplx>(
        symmetrize_matrix(w.l), [](const Rat& r) { return to_complex(r); }));
    out.eval = [core, w, tmat](const SiegelPoint& pt) {
      std::array<CVec, 3> dx, dy;
      core->derivs(pt, dx, dy);
      return assemble_raise(pt, w, core->eval(pt), dx, dy, *tmat);
    };
  }
  return out;
}

namespace {

bool is_translation(const Mat4d& g) {
  return max_abs(g.c()) == 0.0 && g.a() == Mat2d::identity() &&
         g.d() == Mat2d::identity() && g.b().is_symmetric();
}

bool is_gl_embed(const Mat4d& g) {
  return max_abs(g.b()) == 0.0 && max_abs(g.c()) == 0.0;
}

}  // namespace

ModularMap slash(const ModularMap& f, const Mat4d& gamma) {
  const Weight w = f.weight();
  auto core = f.core_ptr();
  if (const auto* terms = core->symbolic_terms()) {
    if (is_translation(gamma)) {
      Mat2d b = gamma.b();
      std::vector<TermList> comps(terms->size());
      for (std::size_t i = 0; i < terms->size(); ++i)
        comps[i] = translate_terms((*terms)[i], b);
      return ModularMap::symbolic(w, std::move(comps));
    }
    if (is_gl_embed(gamma)) {
      Mat2d u = gamma.a();
      std::vector<TermList> substituted(terms->size());
      for (std::size_t i = 0; i < terms->size(); ++i)
        substituted[i] = gl_substitute_terms((*terms)[i], u);
      // j = u^{-T} constant, so the automorphy factor is a constant matrix
      Matrix<Cplx> act = weight_act_matrix(w, complexify(u.transposed()));
      std::vector<TermList> comps(terms->size());
      for (std::size_t i = 0; i < terms->size(); ++i) {
        TermList acc;
        for (std::size_t j = 0; j < terms->size(); ++j) {
          if (act(i, j) == 0.0) continue;
          acc = add_terms(std::move(acc), scale_terms(substituted[j], act(i, j)));
        }
        comps[i] = std::move(acc);
      }
      return ModularMap::symbolic(w, std::move(comps));
    }
  }
  StepPolicy pol = core->policy();
  return ModularMap::numeric(w, [core, w, gamma](const SiegelPoint& pt) {
    Mat2c j = cocycle(gamma, pt);
    SiegelPoint gp = moebius_act(gamma, pt);
    Matrix<Cplx> act = weight_act_matrix(w, j.inverse());
    return act * core->eval(gp);
  }, pol);
}

TensorVector tensor_slash_value(const TensorField& field, const Mat4d& gamma,
                                const SiegelPoint& tau) {
  Mat2c j = cocycle(gamma, tau);
  SiegelPoint gp = moebius_act(gamma, tau);
  Matrix<Cplx> act = tensor_act_matrix(field.sigma, field.model, j.inverse());
  return TensorVector(field.sigma, field.model, act * field.eval(gp));
}

ModularMap projected_op(const ModularMap& f, Dir dir, Comp comp) {
  ProjectionTable table(f.weight());
  Weight tw = table.target(dir, comp);
  if (auto fast = f.core().apply_projected(f.weight(), dir, comp))
    return ModularMap(tw, fast);
  if (!table.present(comp)) {
    return ModularMap::numeric(tw, [n = tw.dim()](const SiegelPoint&) {
      return CVec(n, Cplx(0.0));
    }, f.core().policy());
  }
  auto field = std::make_shared<TensorField>(dir == Dir::L ? lower(f) : raise(f));
  auto proj = std::make_shared<Matrix<Cplx>>(table.projection(dir, comp));
  return ModularMap::numeric(tw, [field, proj](const SiegelPoint& pt) {
    return (*proj) * field->eval(pt);
  }, f.core().policy());
}

std::string CovOp::name() const {
  if (!projected) return dir == Dir::L ? "L" : "R";
  return std::string("pi_") + dir_name(dir) + comp_name(comp) +
         (dir == Dir::L ? " L" : " R");
}

double rel_diff(const CVec& a, const CVec& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max({den, std::abs(a[i]), std::abs(b[i])});
  }
  if (den == 0) return 0.0;
  return num / den;
}

double max_norm(const CVec& a) {
  double r = 0;
  for (const auto& z : a) r = std::max(r, std::abs(z));
  return r;
}

double check_covariance(const ModularMap& f, const Mat4d& gamma, const CovOp& op,
                        const SiegelPoint& tau) {
  // residual relative to the larger of the two sides, with the slashed sample
  // as a floor so identities between vanishing sides stay well normalized
  ModularMap fs = slash(f, gamma);
  double floor_scale = max_norm(fs.eval(tau).coeffs);
  CVec lhs, rhs;
  if (!op.projected) {
    TensorField field = op.dir == Dir::L ? lower(f) : raise(f);
    lhs = tensor_slash_value(field, gamma, tau).coeffs;
    TensorField rhs_field = op.dir == Dir::L ? lower(fs) : raise(fs);
    rhs = rhs_field.eval(tau);
  } else {
    ModularMap pf = projected_op(f, op.dir, op.comp);
    lhs = slash(pf, gamma).eval(tau).coeffs;
    rhs = projected_op(fs, op.dir, op.comp).eval(tau).coeffs;
  }
  double num = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    num = std::max(num, std::abs(lhs[i] - rhs[i]));
  double den = std::max({max_norm(lhs), max_norm(rhs), floor_scale, 1e-300});
  return num / den;
}

RepVector lift_to_group(const ModularMap& f, const Mat4d& g) {
  SiegelPoint i_point;  // iI
  Mat2c j = complexify(g.c()) * Mat2c::identity() * Cplx(0.0, 1.0) + complexify(g.d());
  SiegelPoint gi = moebius_act(g, i_point);
  return weight_act(f.weight(), j.inverse(), f.eval(gi));
}

ModularMap unlift(Weight w, std::function<CVec(const Mat4d&)> F) {
  return ModularMap::numeric(w, [w, F](const SiegelPoint& pt) {
    Mat4d g = base_point_transfer(pt);
    Mat2c j = complexify(sqrt_spd(pt.y).inverse());
    Matrix<Cplx> act = weight_act_matrix(w, j);
    return act * F(g);
  });
}

RoundtripResult roundtrip_constant(const ModularMap& f, int k,
                                   const std::vector<SiegelPoint>& taus) {
  if (k < 4 || k % 4 != 0)
    throw std::domain_error("roundtrip_constant: k must be a positive multiple of 4");
  if (f.weight() != Weight{2 - k / 2, k - 2})
    throw std::invalid_argument("roundtrip_constant: map has the wrong weight");
  ModularMap g = f;
  for (int i = 0; i < k / 2 - 1; ++i) g = projected_op(g, Dir::R, Comp::minus);
  for (int i = 0; i < k / 2 - 1; ++i) g = projected_op(g, Dir::L, Comp::plus);

  RoundtripResult res;
  std::vector<double> residuals;
  for (const auto& tau : taus) {
    CVec fv = f.eval(tau).coeffs;
    CVec gv = g.eval(tau).coeffs;
    double nf = max_norm(fv);
    if (nf < 1e-140) {
      ++res.skipped;
      continue;
    }
    Cplx num = 0, den = 0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
      num += gv[i] * std::conj(fv[i]);
      den += fv[i] * std::conj(fv[i]);
    }
    Cplx ratio = num / den;
    res.ratios.push_back(ratio);
    CVec fit = fv;
    for (auto& z : fit) z *= ratio;
    residuals.push_back(rel_diff(gv, fit));
  }
  if (res.ratios.empty()) throw std::domain_error("roundtrip_constant: all samples skipped");
  Cplx mean = 0;
  for (auto r : res.ratios) mean += r;
  mean /= double(res.ratios.size());
  res.mean = mean;
  for (auto r : res.ratios)
    res.spread = std::max(res.spread, std::abs(r - mean) / std::max(1e-300, std::abs(mean)));
  for (double r : residuals) res.max_residual = std::max(res.max_residual, r);
  return res;
}

}  // namespace siegel
