#pragma once

#include <complex>

#include "siegel/rational.hpp"
#include "siegel/smallmat.hpp"

namespace siegel {

// A point x + iy of the genus-2 upper half space; x, y symmetric, y positive
// definite.
struct SiegelPoint {
  Mat2d x;  // [[x1, u], [u, x2]]
  Mat2d y;  // [[y1, v], [v, y2]]

  SiegelPoint() : x(Mat2d::zero()), y(Mat2d::identity()) {}
  SiegelPoint(const Mat2d& x_, const Mat2d& y_);

  static SiegelPoint from_entries(double x1, double u, double x2, double y1, double v,
                                  double y2) {
    return SiegelPoint(Mat2d::sym(x1, u, x2), Mat2d::sym(y1, v, y2));
  }

  Mat2c tau() const {
    return complexify(x) + complexify(y) * std::complex<double>(0.0, 1.0);
  }

  double x1() const { return x(0, 0); }
  double u() const { return x(0, 1); }
  double x2() const { return x(1, 1); }
  double y1() const { return y(0, 0); }
  double v() const { return y(0, 1); }
  double y2() const { return y(1, 1); }
};

bool is_positive_definite(const Mat2d& y);
double min_eigenvalue(const Mat2d& y);

// closed-form SPD square root of a 2x2 matrix
Mat2d sqrt_spd(const Mat2d& y);

bool is_symplectic(const Mat4d& g, double tol);
bool is_symplectic_exact(const Mat4<Rat>& g);

// (a tau + b)(c tau + d)^{-1}
SiegelPoint moebius_act(const Mat4d& g, const SiegelPoint& tau);
Mat2c moebius_act_complex(const Mat4d& g, const Mat2c& tau);

// cocycle j(g, tau) = c tau + d
Mat2c cocycle(const Mat4d& g, const SiegelPoint& tau);

// g_tau = (sqrt(y), x sqrt(y)^{-1}; 0, sqrt(y)^{-1}) moving iI to tau
Mat4d base_point_transfer(const SiegelPoint& tau);

// generators used by tests and random-sampling batteries
Mat4d translation(const Mat2d& b);
Mat4d gl_embed(const Mat2d& u);
Mat4d inversion();  // the symplectic form J

Mat4<Rat> translation_q(const Mat2<Rat>& b);
Mat4<Rat> gl_embed_q(const Mat2<Rat>& u);
Mat4<Rat> inversion_q();

}  // namespace siegel
