#pragma once

#include <complex>
#include <string>
#include <vector>

#include "siegel/rational.hpp"
#include "siegel/smallmat.hpp"

namespace siegel {

using Cplx = std::complex<double>;
using CVec = std::vector<Cplx>;

// An irreducible GL(2) weight det^k sym^l. Negative l is allowed as a tag for
// the empty target of a degenerate projection; genuine weights have l >= 0.
struct Weight {
  int k = 0;
  int l = 0;

  int dim() const { return l >= 0 ? l + 1 : 0; }
  bool operator==(const Weight& o) const { return k == o.k && l == o.l; }
  bool operator!=(const Weight& o) const { return !(*this == o); }
  std::string str() const {
    return "det^" + std::to_string(k) + " sym^" + std::to_string(l);
  }
};

// dual of det^k sym^l
Weight dual_weight(const Weight& w);

// coefficient j belongs to the monomial X^{l-j} Y^j
struct RepVector {
  Weight w;
  CVec coeffs;

  RepVector() = default;
  RepVector(Weight weight, CVec c);
};

// Which transformation model the sym^2 tensor factor uses. Values of the
// lowering operator live in the dual model, values of the raising operator in
// the polynomial (substitution) model.
enum class Sym2Model { dual, poly };

// element of sym^2 (x) det^k sym^l; rows X^2, XY, Y^2 of a 3 x (l+1) grid
// stored row-major
struct TensorVector {
  Weight sigma;
  Sym2Model model = Sym2Model::poly;
  CVec coeffs;

  TensorVector() = default;
  TensorVector(Weight s, Sym2Model m, CVec c);

  Cplx& at(int row, int i) { return coeffs[row * (sigma.l + 1) + i]; }
  const Cplx& at(int row, int i) const { return coeffs[row * (sigma.l + 1) + i]; }
};

// pack a symmetric 2x2 matrix of component vectors into tensor coordinates:
// row X^2 = S_11, row XY = 2 S_12, row Y^2 = S_22
CVec pack_sym2(const CVec& s11, const CVec& s12, const CVec& s22);

// matrix of the substitution action p |-> p(g^T z) on degree-d monomial
// coefficients
template <typename T>
Matrix<T> sym_substitution(const Mat2<T>& g, int d);

// full weight action matrix det(g)^k * sym_substitution(g, l)
Matrix<Cplx> weight_act_matrix(const Weight& w, const Mat2c& g);
Matrix<Rat> weight_act_matrix_q(const Weight& w, const Mat2<Rat>& g);

RepVector weight_act(const Weight& w, const Mat2c& g, const RepVector& v);

// action matrix on tensor coordinates for weight sigma and the given model
Matrix<Cplx> tensor_act_matrix(const Weight& sigma, Sym2Model model, const Mat2c& g);

// GL2-invariant pairing V(sigma) x V(dual sigma) -> C
Cplx invariant_pairing(const RepVector& v, const RepVector& w);

// squared Fischer norm of the monomial X^a Y^b: a! b! / (a+b)!
Rat fischer_norm2(int a, int b);

// the symmetrization map on sym^2 (x) sym^l tensor coordinates (zero map for
// l = 0)
Matrix<Rat> symmetrize_matrix(int l);
TensorVector symmetrize_t(const TensorVector& w);

enum class Dir { L, R };
enum class Comp { plus, zero, minus };

const char* dir_name(Dir d);
const char* comp_name(Comp c);

// Clebsch-Gordan data for sym^2 (x) det^k sym^l: six equivariant projections
// onto the irreducible constituents and the matching embeddings, exact over Q.
// The L-side maps include the adjugate twist that converts the dual-model
// sym^2 factor into substitution-model coordinates.
class ProjectionTable {
 public:
  explicit ProjectionTable(Weight sigma);

  const Weight& sigma() const { return sigma_; }
  Weight target(Dir dir, Comp comp) const;
  bool present(Comp comp) const;

  const Matrix<Rat>& projection_q(Dir dir, Comp comp) const;
  const Matrix<Rat>& embedding_q(Dir dir, Comp comp) const;
  const Matrix<Cplx>& projection(Dir dir, Comp comp) const;
  const Matrix<Cplx>& embedding(Dir dir, Comp comp) const;

  std::string to_json() const;

 private:
  Weight sigma_;
  Matrix<Rat> proj_q_[2][3];
  Matrix<Rat> embed_q_[2][3];
  Matrix<Cplx> proj_c_[2][3];
  Matrix<Cplx> embed_c_[2][3];
};

ProjectionTable build_projection_table(const Weight& sigma);

RepVector project(const ProjectionTable& table, Dir dir, Comp comp,
                  const TensorVector& w);

}  // namespace siegel
