#include "siegel/gl2.hpp"

#include <sstream>
#include <stdexcept>

namespace siegel {

Weight dual_weight(const Weight& w) { return {-w.k - w.l, w.l}; }

RepVector::RepVector(Weight weight, CVec c) : w(weight), coeffs(std::move(c)) {
  if (int(coeffs.size()) != w.dim())
    throw std::invalid_argument("RepVector: coefficient count does not match weight");
}

TensorVector::TensorVector(Weight s, Sym2Model m, CVec c)
    : sigma(s), model(m), coeffs(std::move(c)) {
  if (int(coeffs.size()) != 3 * (sigma.l + 1))
    throw std::invalid_argument("TensorVector: expected a 3 x (l+1) grid");
}

CVec pack_sym2(const CVec& s11, const CVec& s12, const CVec& s22) {
  CVec out;
  out.reserve(3 * s11.size());
  for (const auto& v : s11) out.push_back(v);
  for (const auto& v : s12) out.push_back(2.0 * v);
  for (const auto& v : s22) out.push_back(v);
  return out;
}

namespace {

std::vector<Rat> binomial_row(int n) {
  std::vector<Rat> r(n + 1);
  r[0] = 1;
  for (int j = 1; j <= n; ++j) r[j] = r[j - 1] * (n - j + 1) / j;
  return r;
}

Rat factorial(int n) {
  Rat r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// 3x3 matrix of the adjugate map on packed sym^2 coordinates:
// (c0, c1, c2) -> (c2, -c1, c0)
Matrix<Rat> adjugate_pack_matrix() {
  Matrix<Rat> m(3, 3);
  m(0, 2) = 1;
  m(1, 1) = -1;
  m(2, 0) = 1;
  return m;
}

Matrix<Rat> kron(const Matrix<Rat>& a, const Matrix<Rat>& b) {
  Matrix<Rat> m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          m(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return m;
}

Matrix<Cplx> kron_c(const Matrix<Cplx>& a, const Matrix<Cplx>& b) {
  Matrix<Cplx> m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          m(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return m;
}

int tensor_index(int m, int i, int l) { return m * (l + 1) + i; }

// lowering operator Y d/dX acting as a derivation of sym^2 (x) sym^l
Matrix<Rat> tensor_lowering_matrix(int l) {
  int n = 3 * (l + 1);
  Matrix<Rat> f(n, n);
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i <= l; ++i) {
      int j = tensor_index(m, i, l);
      int a = 2 - m;  // X-degree in the sym^2 factor
      if (a > 0) f(tensor_index(m + 1, i, l), j) += a;
      if (i < l) f(tensor_index(m, i + 1, l), j) += l - i;
    }
  return f;
}

std::vector<Rat> matvec_q(const Matrix<Rat>& m, const std::vector<Rat>& v) {
  std::vector<Rat> r(m.rows(), Rat(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!(m(i, j) == 0)) r[i] += m(i, j) * v[j];
  return r;
}

}  // namespace

template <typename T>
Matrix<T> sym_substitution(const Mat2<T>& g, int d) {
  if (d < 0) return Matrix<T>(0, 0);  // degenerate projection targets
  // column j: coefficients of (g00 X + g10 Y)^{d-j} (g01 X + g11 Y)^j
  Matrix<T> m(d + 1, d + 1);
  if (d == 0) {
    m(0, 0) = T(1);
    return m;
  }
  for (int j = 0; j <= d; ++j) {
    std::vector<T> poly(d + 1, T(0));
    // expand the two binomials and convolve
    std::vector<T> p1(d - j + 1, T(0)), p2(j + 1, T(0));
    {
      auto bin = binomial_row(d - j);
      T px = T(1);
      for (int r = 0; r <= d - j; ++r) {
        // coefficient of X^{d-j-r} Y^r
        T c = T(1);
        for (int q = 0; q < d - j - r; ++q) c = c * g(0, 0);
        for (int q = 0; q < r; ++q) c = c * g(1, 0);
        T b;
        if constexpr (std::is_same_v<T, Rat>)
          b = bin[r];
        else
          b = T(to_double(bin[r]));
        p1[r] = b * c;
      }
      (void)px;
    }
    {
      auto bin = binomial_row(j);
      for (int s = 0; s <= j; ++s) {
        T c = T(1);
        for (int q = 0; q < j - s; ++q) c = c * g(0, 1);
        for (int q = 0; q < s; ++q) c = c * g(1, 1);
        T b;
        if constexpr (std::is_same_v<T, Rat>)
          b = bin[s];
        else
          b = T(to_double(bin[s]));
        p2[s] = b * c;
      }
    }
    for (int r = 0; r <= d - j; ++r)
      for (int s = 0; s <= j; ++s) poly[r + s] = poly[r + s] + p1[r] * p2[s];
    for (int i = 0; i <= d; ++i) m(i, j) = poly[i];
  }
  return m;
}

template Matrix<Rat> sym_substitution<Rat>(const Mat2<Rat>&, int);
template Matrix<Cplx> sym_substitution<Cplx>(const Mat2<Cplx>&, int);
template Matrix<double> sym_substitution<double>(const Mat2<double>&, int);

Matrix<Cplx> weight_act_matrix(const Weight& w, const Mat2c& g) {
  Matrix<Cplx> m = sym_substitution(g, w.l);
  Cplx det = g.det();
  Cplx scale = std::pow(det, double(w.k));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= scale;
  return m;
}

Matrix<Rat> weight_act_matrix_q(const Weight& w, const Mat2<Rat>& g) {
  Matrix<Rat> m = sym_substitution(g, w.l);
  Rat det = g.det();
  if (det == 0) throw std::domain_error("weight_act: singular matrix");
  Rat scale = 1;
  for (int i = 0; i < std::abs(w.k); ++i) scale *= det;
  if (w.k < 0) scale = Rat(1) / scale;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) * scale;
  return m;
}

RepVector weight_act(const Weight& w, const Mat2c& g, const RepVector& v) {
  if (v.w != w) throw std::invalid_argument("weight_act: vector weight mismatch");
  if (std::abs(g.det()) < 1e-300) throw std::domain_error("weight_act: singular matrix");
  return RepVector(w, weight_act_matrix(w, g) * v.coeffs);
}

Matrix<Cplx> tensor_act_matrix(const Weight& sigma, Sym2Model model, const Mat2c& g) {
  Mat2c h = (model == Sym2Model::poly) ? g : g.inverse().transposed();
  Matrix<Cplx> s2 = sym_substitution(h, 2);
  Matrix<Cplx> sl = sym_substitution(g, sigma.l);
  Matrix<Cplx> m = kron_c(s2, sl);
  Cplx scale = std::pow(g.det(), double(sigma.k));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= scale;
  return m;
}

Cplx invariant_pairing(const RepVector& v, const RepVector& w) {
  if (v.w.l != w.w.l || w.w != dual_weight(v.w))
    throw std::invalid_argument("invariant_pairing: weights are not dual");
  int l = v.w.l;
  auto bin = binomial_row(l);
  Cplx s = 0;
  for (int i = 0; i <= l; ++i) {
    double sign = (i % 2 == 0) ? 1.0 : -1.0;
    s += sign / to_double(bin[i]) * v.coeffs[i] * w.coeffs[l - i];
  }
  return s;
}

Rat fischer_norm2(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b); }

Matrix<Rat> symmetrize_matrix(int l) {
  int n = 3 * (l + 1);
  Matrix<Rat> m(n, n);
  if (l == 0) return m;  // empty-sum convention
  // image of (v1 v2) (x) X^{l-i} Y^i, v1 v2 in {XX, XY, YY}; exchanging one of
  // v1, v2 against each factor of the sym^l monomial in turn
  Rat pref = Rat(1) / Rat(2 * l);
  auto add = [&](int row_m, int row_i, int col, const Rat& c) {
    m(tensor_index(row_m, row_i, l), col) += c;
  };
  for (int mm = 0; mm < 3; ++mm) {
    // v1 v2 with X-count (2 - mm)
    char v1 = (mm <= 1) ? 'X' : 'Y';
    char v2 = (mm == 0) ? 'X' : 'Y';
    for (int i = 0; i <= l; ++i) {
      int col = tensor_index(mm, i, l);
      int nx = l - i, ny = i;
      // factor pulled out is X (count nx) or Y (count ny)
      for (int pulled = 0; pulled < 2; ++pulled) {
        char w = pulled == 0 ? 'X' : 'Y';
        int count = pulled == 0 ? nx : ny;
        if (count == 0) continue;
        int rx = nx - (pulled == 0 ? 1 : 0);
        int ry = ny - (pulled == 1 ? 1 : 0);
        // term (w v2) (x) v1 * rest
        {
          int m2 = ((w == 'Y') ? 1 : 0) + ((v2 == 'Y') ? 1 : 0);
          int ix = rx + ((v1 == 'X') ? 1 : 0);
          int iy = ry + ((v1 == 'Y') ? 1 : 0);
          (void)ix;
          add(m2, iy, col, pref * count);
        }
        // term (v1 w) (x) v2 * rest
        {
          int m2 = ((v1 == 'Y') ? 1 : 0) + ((w == 'Y') ? 1 : 0);
          int iy = ry + ((v2 == 'Y') ? 1 : 0);
          add(m2, iy, col, pref * count);
        }
      }
    }
  }
  return m;
}

TensorVector symmetrize_t(const TensorVector& w) {
  Matrix<Rat> m = symmetrize_matrix(w.sigma.l);
  Matrix<Cplx> mc = convert_matrix<Rat, Cplx>(m, [](const Rat& r) { return to_complex(r); });
  return TensorVector(w.sigma, w.model, mc * w.coeffs);
}

const char* dir_name(Dir d) { return d == Dir::L ? "L" : "R"; }
const char* comp_name(Comp c) {
  switch (c) {
    case Comp::plus: return "+";
    case Comp::zero: return "0";
    default: return "-";
  }
}

ProjectionTable::ProjectionTable(Weight sigma) : sigma_(sigma) {
  if (sigma.l < 0) throw std::invalid_argument("ProjectionTable: negative sym power");
  const int l = sigma.l;
  const int n = 3 * (l + 1);
  Matrix<Rat> f = tensor_lowering_matrix(l);
  Matrix<Rat> adj_twist = kron(adjugate_pack_matrix(), Matrix<Rat>::identity(l + 1));

  struct CompSpec {
    Comp comp;
    int deg;
    std::vector<Rat> hw;
  };
  std::vector<CompSpec> specs;
  {
    std::vector<Rat> w(n, Rat(0));
    w[tensor_index(0, 0, l)] = 1;  // X^2 (x) X^l
    specs.push_back({Comp::plus, l + 2, w});
  }
  if (l >= 1) {
    std::vector<Rat> w(n, Rat(0));
    w[tensor_index(0, 1, l)] = 1;   // X^2 (x) X^{l-1}Y
    w[tensor_index(1, 0, l)] = -1;  // XY (x) X^l
    specs.push_back({Comp::zero, l, w});
  }
  if (l >= 2) {
    std::vector<Rat> w(n, Rat(0));
    w[tensor_index(0, 2, l)] = 1;
    w[tensor_index(1, 1, l)] = -2;
    w[tensor_index(2, 0, l)] = 1;
    specs.push_back({Comp::minus, l - 2, w});
  }

  // Fischer weights of the tensor basis
  std::vector<Rat> fw(n);
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i <= l; ++i)
      fw[tensor_index(m, i, l)] = fischer_norm2(2 - m, m) * fischer_norm2(l - i, i);
  // the packed XY row stores 2*s12, so monomial coordinates differ from packed
  // ones by that factor; all maps below are written in monomial coordinates
  // and converted at the end.

  for (int d = 0; d < 2; ++d)
    for (int c = 0; c < 3; ++c) {
      proj_q_[d][c] = Matrix<Rat>(0, n);
      embed_q_[d][c] = Matrix<Rat>(n, 0);
    }

  for (const auto& spec : specs) {
    int deg = spec.deg;
    Matrix<Rat> pi(deg + 1, n), emb(n, deg + 1);
    std::vector<Rat> u = spec.hw;
    for (int j = 0; j <= deg; ++j) {
      if (j > 0) u = matvec_q(f, u);
      Rat n2 = 0;
      for (int idx = 0; idx < n; ++idx) n2 += u[idx] * u[idx] * fw[idx];
      Rat scale = factorial(deg) / factorial(deg - j);
      for (int idx = 0; idx < n; ++idx) {
        pi(j, idx) = scale / n2 * u[idx] * fw[idx];
        emb(idx, j) = u[idx] / scale;
      }
    }
    int ci = int(spec.comp);
    proj_q_[int(Dir::R)][ci] = pi;
    embed_q_[int(Dir::R)][ci] = emb;
    proj_q_[int(Dir::L)][ci] = pi * adj_twist;
    embed_q_[int(Dir::L)][ci] = adj_twist * emb;
  }

  for (int d = 0; d < 2; ++d)
    for (int c = 0; c < 3; ++c) {
      proj_c_[d][c] = convert_matrix<Rat, Cplx>(proj_q_[d][c],
                                                [](const Rat& r) { return to_complex(r); });
      embed_c_[d][c] = convert_matrix<Rat, Cplx>(embed_q_[d][c],
                                                 [](const Rat& r) { return to_complex(r); });
    }
}

Weight ProjectionTable::target(Dir dir, Comp comp) const {
  int dl = comp == Comp::plus ? 2 : (comp == Comp::zero ? 0 : -2);
  int dk = comp == Comp::plus ? 0 : (comp == Comp::zero ? 1 : 2);
  if (dir == Dir::L) dk -= 2;
  return {sigma_.k + dk, sigma_.l + dl};
}

bool ProjectionTable::present(Comp comp) const {
  switch (comp) {
    case Comp::plus: return true;
    case Comp::zero: return sigma_.l >= 1;
    default: return sigma_.l >= 2;
  }
}

const Matrix<Rat>& ProjectionTable::projection_q(Dir dir, Comp comp) const {
  return proj_q_[int(dir)][int(comp)];
}
const Matrix<Rat>& ProjectionTable::embedding_q(Dir dir, Comp comp) const {
  return embed_q_[int(dir)][int(comp)];
}
const Matrix<Cplx>& ProjectionTable::projection(Dir dir, Comp comp) const {
  return proj_c_[int(dir)][int(comp)];
}
const Matrix<Cplx>& ProjectionTable::embedding(Dir dir, Comp comp) const {
  return embed_c_[int(dir)][int(comp)];
}

std::string ProjectionTable::to_json() const {
  std::ostringstream os;
  os << "{\"weight\":{\"k\":" << sigma_.k << ",\"l\":" << sigma_.l << "}";
  for (Dir d : {Dir::L, Dir::R})
    for (Comp c : {Comp::plus, Comp::zero, Comp::minus}) {
      os << ",\"pi_" << dir_name(d) << comp_name(c) << "\":[";
      const auto& m = projection_q(d, c);
      bool first = true;
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          if (!first) os << ",";
          first = false;
          os << "\"" << m(i, j).get_str() << "\"";
        }
      os << "]";
    }
  os << "}";
  return os.str();
}

ProjectionTable build_projection_table(const Weight& sigma) {
  return ProjectionTable(sigma);
}

RepVector project(const ProjectionTable& table, Dir dir, Comp comp,
                  const TensorVector& w) {
  if (w.sigma != table.sigma())
    throw std::invalid_argument("project: tensor weight does not match table");
  Weight tw = table.target(dir, comp);
  if (!table.present(comp)) return RepVector(tw, CVec(tw.dim(), Cplx(0)));
  return RepVector(tw, table.projection(dir, comp) * w.coeffs);
}

}  // namespace siegel
