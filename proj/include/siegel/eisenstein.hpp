#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "siegel/cosets.hpp"
#include "siegel/gridfn.hpp"
#include "siegel/modular_map.hpp"

namespace siegel {

// symmetric rational Fourier index; the level-1 dual lattice has integer
// diagonal and half-integer off-diagonal entries
struct FourierIndex {
  Rat t11, t12, t22;

  enum class Signature { positive_definite, negative_definite, indefinite, degenerate };

  FourierIndex() : t11(0), t12(0), t22(0) {}
  FourierIndex(Rat a, Rat b, Rat c) : t11(std::move(a)), t12(std::move(b)), t22(std::move(c)) {}

  Signature signature() const {
    Rat det = t11 * t22 - t12 * t12;
    if (det > 0) return t11 > 0 ? Signature::positive_definite : Signature::negative_definite;
    if (det < 0) return Signature::indefinite;
    return Signature::degenerate;
  }

  Mat2d matrix() const {
    double b = to_double(t12);
    return Mat2d::sym(to_double(t11), b, to_double(t22));
  }

  bool operator<(const FourierIndex& o) const {
    if (t11 != o.t11) return t11 < o.t11;
    if (t12 != o.t12) return t12 < o.t12;
    return t22 < o.t22;
  }
  bool operator==(const FourierIndex& o) const {
    return t11 == o.t11 && t12 == o.t12 && t22 == o.t22;
  }
  std::string str() const {
    return "(" + t11.get_str() + "," + t12.get_str() + "," + t22.get_str() + ")";
  }
};

// coset classes at a truncation height plus the subset visible one height
// lower, used for the empirical truncation error estimate
struct CosetWindow {
  int height = 0;
  std::vector<CosetRep> classes;
  std::vector<char> in_lower;  // class also present at height - 1

  static CosetWindow build(int height);
};

// truncated Eisenstein sum: sum over classes of det(y)^{1/2} |_{det^k} gamma,
// deterministic order, compensated accumulation
Cplx eisenstein_sum(int k, const SiegelPoint& tau, const std::vector<CosetRep>& classes);

// user-facing series value (requires even k > 2 where the series converges)
Cplx eval_eisenstein(int k, const SiegelPoint& tau, const CosetWindow& win);

// skew companion: sum of w^k / |w|^{2k+1} with w = det(c tau + d); the weight
// is k_plus_1 = k + 1
Cplx skew_eisenstein(int k_plus_1, const SiegelPoint& tau, const CosetWindow& win);
// one summand of each series, exposed for the term-by-term relation test
Cplx eisenstein_term(int k, const SiegelPoint& tau, const CosetRep& rep);
Cplx skew_term(int k_plus_1, const SiegelPoint& tau, const CosetRep& rep);

struct FourierValue {
  Cplx value{0.0, 0.0};
  Cplx delta_quad{0.0, 0.0};   // I_{2N} - I_N
  Cplx delta_trunc{0.0, 0.0};  // I_{2N} - I_{2N over the lower window}
  double quad_err() const { return std::abs(delta_quad); }
  double trunc_err() const { return std::abs(delta_trunc); }
  double budget() const { return quad_err() + trunc_err(); }
};

// x-integral of the truncated sum against e(-tx) over the unit cube on the
// (2N)^3 product-trapezoid grid; several indices share one sweep
std::vector<FourierValue> fourier_coefficients(int k, const std::vector<FourierIndex>& ts,
                                               const Mat2d& y, int n_quad,
                                               const CosetWindow& win);
FourierValue fourier_coefficient(int k, const FourierIndex& t, const Mat2d& y, int n_quad,
                                 const CosetWindow& win);

// tabulated analytic part of one Fourier coefficient over a y-grid
struct CoefficientProfile {
  int k = 0;  // Eisenstein weight
  FourierIndex t;
  YGrid grid;
  int n_quad = 0;
  int height_bound = 0;
  int interp_order = 3;
  std::vector<Cplx> samples;      // node-major
  std::vector<Cplx> delta_quad;   // per-node quadrature difference
  std::vector<Cplx> delta_trunc;  // per-node window difference
  std::vector<double> errors;     // per-node budget
  double max_error = 0.0;

  GridFunction as_grid_function() const;
  // the two empirical difference fields as grid functions, transported through
  // the same operator stack as the samples to budget lifted kernels
  GridFunction quad_field() const;
  GridFunction trunc_field() const;
};

// profiles for several indices sharing the Eisenstein sweep per node
std::vector<CoefficientProfile> build_profiles(int k, const std::vector<FourierIndex>& ts,
                                               const YGrid& grid, int n_quad,
                                               const CosetWindow& win, int jobs);
CoefficientProfile build_profile(int k, const FourierIndex& t, const YGrid& grid,
                                 int n_quad, const CosetWindow& win, int jobs);

// kernel obtained from `level` applications of pi_{L,+} L to the profile;
// weight det^{k_sk/2 - 2 level} sym^{2 level} with k_sk = 2 * profile.k
struct LiftedKernel {
  int k_sk = 0;
  FourierIndex t;
  int level = 0;
  GridFunction fn;
  GridFunction dq, dt;  // difference fields carried through the same stencils

  // absolute error budget: stencil/roundoff channel plus the transported
  // empirical differences scaled by a calibration safety factor
  double budget(double safety = 3.0) const;
};

LiftedKernel lift_kernel(const CoefficientProfile& profile, int level, int rich_levels);

// one more projected operator applied to a kernel together with its budget
// fields; used by the vanishing-identity checks
struct KernelOpCheck {
  GridFunction value, dq, dt;
  double residual_max = 0.0;  // max interior |value|
  double budget_max = 0.0;    // max interior per-node budget
  double worst_ratio = 0.0;   // max over interior nodes of residual / budget
};

KernelOpCheck apply_kernel_op(const LiftedKernel& kern, Dir dir, Comp comp,
                              int rich_levels, double safety = 3.0);

// scalar reference profile: det(y)^{(k+2)/4} K_{k/2}(w) / w^{k/4} with
// w = trace(ty)^2 - det(t) det(y)
double bessel_reference(int k, const FourierIndex& t, const Mat2d& y);

struct CoefficientList {
  std::vector<std::pair<FourierIndex, Cplx>> entries;
};

// finite sum f* of level-(k/2 - 1) kernels; kernels must share grid and k
ModularMap assemble_fstar(const CoefficientList& coeffs,
                          const std::vector<LiftedKernel>& kernels, int rich_levels);

struct Decomposition {
  ModularMap f_plus;
  ModularMap f_minus;
  CoefficientList recovered;
  double condition = 0.0;
  double residual = 0.0;  // least-squares misfit of pi_{L,+} L f in the kernel basis
};

// split f into a lowering-closed part and a kernel-series part by matching
// pi_{L,+} L f against the level-(k/2) kernels at the sample points
Decomposition decompose(const ModularMap& f, int k,
                        const std::vector<LiftedKernel>& low_kernels,
                        const std::vector<LiftedKernel>& high_kernels,
                        const std::vector<SiegelPoint>& samples, int rich_levels);

}  // namespace siegel
