#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "siegel/gl2.hpp"
#include "siegel/symplectic.hpp"

namespace siegel {

// finite-difference configuration for the numeric derivative path
struct StepPolicy {
  double h0 = 1e-3;    // base step, scaled with ||y||
  int levels = 3;      // Richardson extrapolation levels
};

// derivative of a 1D sampler via central differences + Richardson; err_est
// receives the difference of the last two extrapolation levels
Cplx richardson_derivative(const std::function<Cplx(double)>& sample, double h,
                           int levels, double* err_est = nullptr);

// One closed-form factor product: monomials in the entries of x and y, a
// half-integer power of det(y), a character e(tx) = exp(2 pi i tr(tx)) and a
// radial factor exp(-2 pi tr(sy)).
struct SymbolicTerm {
  Cplx coeff{1.0, 0.0};
  std::array<int, 3> xpow{0, 0, 0};  // x1, u, x2
  std::array<int, 3> ypow{0, 0, 0};  // y1, v, y2
  int det_half = 0;                  // det(y)^{det_half / 2}
  Mat2d t = Mat2d::zero();
  Mat2d s = Mat2d::zero();
};

using TermList = std::vector<SymbolicTerm>;

Cplx eval_terms(const TermList& terms, const SiegelPoint& pt);
TermList dx_terms(const TermList& terms, int axis);
TermList dy_terms(const TermList& terms, int axis);
TermList scale_terms(const TermList& terms, Cplx c);
TermList mul_y_monomial(const TermList& terms, int axis);    // multiply by y1, v or y2
TermList mul_det_power(const TermList& terms, int half);     // multiply by det(y)^{half/2}
TermList add_terms(TermList a, const TermList& b);
TermList simplify(TermList terms);
// tau -> tau + b for symmetric b
TermList translate_terms(const TermList& terms, const Mat2d& b);
// tau -> u tau u^T
TermList gl_substitute_terms(const TermList& terms, const Mat2d& u);

// convenience constructors
TermList term_det_y_power(int half);                       // det(y)^{half/2}
TermList term_exponential(const Mat2d& t, const Mat2d& s); // e(tx) exp(-2 pi tr(sy))
TermList term_e_tau(const Mat2d& t);                       // e(t tau)

class MapCore;
using MapCorePtr = std::shared_ptr<const MapCore>;

// Evaluation + first-derivative interface behind ModularMap. Implementations:
// exact symbolic term lists, generic numeric evaluators (finite differences)
// and tabulated kernel grids (see gridfn.hpp).
class MapCore {
 public:
  virtual ~MapCore() = default;
  virtual int dim() const = 0;
  virtual CVec eval(const SiegelPoint& pt) const = 0;
  // six first partials: dxo[axis], dyo[axis] are dim-sized vectors
  virtual void derivs(const SiegelPoint& pt, std::array<CVec, 3>& dxo,
                      std::array<CVec, 3>& dyo) const = 0;
  // fast path for pi o (L|R); null means "use the generic route"
  virtual MapCorePtr apply_projected(const Weight&, Dir, Comp) const { return nullptr; }
  virtual const std::vector<TermList>* symbolic_terms() const { return nullptr; }
  virtual StepPolicy policy() const { return {}; }
  // scalar error scale for tabulated cores (0 for closed forms)
  virtual double error_budget() const { return 0.0; }
};

// An evaluable V(sigma)-valued function on the upper half space with a
// declared differentiation strategy.
class ModularMap {
 public:
  ModularMap() = default;
  ModularMap(Weight w, MapCorePtr core);

  static ModularMap symbolic(Weight w, std::vector<TermList> comps, StepPolicy pol = {});
  // scalar closed form placed in a single component map (weight dim must be 1)
  static ModularMap symbolic_scalar(Weight w, TermList terms);
  static ModularMap numeric(Weight w, std::function<CVec(const SiegelPoint&)> f,
                            StepPolicy pol = {});

  bool valid() const { return core_ != nullptr; }
  const Weight& weight() const { return weight_; }
  RepVector eval(const SiegelPoint& pt) const;
  const MapCore& core() const { return *core_; }
  MapCorePtr core_ptr() const { return core_; }
  bool is_symbolic() const { return core_ && core_->symbolic_terms(); }
  double error_budget() const { return core_ ? core_->error_budget() : 0.0; }

  ModularMap operator+(const ModularMap& o) const;
  ModularMap operator-(const ModularMap& o) const;
  ModularMap scaled(Cplx c) const;

  // weighted sum keeping the children's fast operator paths
  static ModularMap combination(Weight w,
                                std::vector<std::pair<Cplx, ModularMap>> parts);

 private:
  Weight weight_{};
  MapCorePtr core_;
};

// value of the unprojected lowering/raising operator: a tensor-valued map
struct TensorField {
  Weight sigma;
  Sym2Model model = Sym2Model::poly;
  std::function<CVec(const SiegelPoint&)> eval;  // packed 3 x (l+1)
  std::vector<TermList> terms;                   // nonempty on the exact path

  bool is_symbolic() const { return !terms.empty(); }
  TensorVector value(const SiegelPoint& pt) const {
    return TensorVector(sigma, model, eval(pt));
  }
};

// L f = y (d_taubar f) y, valued in the dual-model sym^2 tensor
TensorField lower(const ModularMap& f);
// R f = d_tau (x) f - (ik/2) y^{-1} (x) f - (il/2) t(y^{-1} (x) f)
TensorField raise(const ModularMap& f);

// packed tensor values assembled from the six first partials at pt; shared by
// the closed-form, numeric and grid paths
CVec assemble_lower(const SiegelPoint& pt, const std::array<CVec, 3>& dx,
                    const std::array<CVec, 3>& dy);
CVec assemble_raise(const SiegelPoint& pt, const Weight& w, const CVec& fval,
                    const std::array<CVec, 3>& dx, const std::array<CVec, 3>& dy,
                    const Matrix<Cplx>& tmat);

// slash action f |-> sigma(c tau + d)^{-1} f(gamma tau); stays symbolic for
// translations and GL-embeddings
ModularMap slash(const ModularMap& f, const Mat4d& gamma);
// slash at the tensor weight of a lowering/raising value
TensorVector tensor_slash_value(const TensorField& field, const Mat4d& gamma,
                                const SiegelPoint& tau);

ModularMap projected_op(const ModularMap& f, Dir dir, Comp comp);

// covariance test specification: dir picks lower (L) or raise (R); when
// projected, comp selects the Clebsch-Gordan constituent
struct CovOp {
  Dir dir = Dir::L;
  bool projected = false;
  Comp comp = Comp::plus;
  std::string name() const;
};

// relative residual of the covariance identity at one point
double check_covariance(const ModularMap& f, const Mat4d& gamma, const CovOp& op,
                        const SiegelPoint& tau);

// A(f)(g) = sigma(j(g, iI))^{-1} f(g<i>)
RepVector lift_to_group(const ModularMap& f, const Mat4d& g);
// inverse on lifted functions, evaluated through the base-point section
ModularMap unlift(Weight w, std::function<CVec(const Mat4d&)> F);

struct RoundtripResult {
  Cplx mean{0.0, 0.0};
  double spread = 0.0;       // max relative deviation of the ratios
  double max_residual = 0.0; // worst per-point misfit against ratio * f
  std::vector<Cplx> ratios;
  int skipped = 0;
};

// per-point ratio of (pi_{L,+} L)^{k/2-1} (pi_{R,-} R)^{k/2-1} f against f
RoundtripResult roundtrip_constant(const ModularMap& f, int k,
                                   const std::vector<SiegelPoint>& taus);

double rel_diff(const CVec& a, const CVec& b);
double max_norm(const CVec& a);

}  // namespace siegel
