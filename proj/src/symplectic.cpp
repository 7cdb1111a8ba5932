#include "siegel/symplectic.hpp"

#include <cmath>
#include <stdexcept>

namespace siegel {

SiegelPoint::SiegelPoint(const Mat2d& x_, const Mat2d& y_) : x(x_), y(y_) {
  if (std::fabs(x(0, 1) - x(1, 0)) > 1e-14 * (1.0 + max_abs(x)) ||
      std::fabs(y(0, 1) - y(1, 0)) > 1e-14 * (1.0 + max_abs(y)))
    throw std::domain_error("SiegelPoint: x and y must be symmetric");
  x(1, 0) = x(0, 1);
  y(1, 0) = y(0, 1);
  if (!is_positive_definite(y))
    throw std::domain_error("SiegelPoint: imaginary part must be positive definite");
}

bool is_positive_definite(const Mat2d& y) {
  return y(0, 0) > 0 && y.det() > 0;
}

double min_eigenvalue(const Mat2d& y) {
  double tr = y.trace(), de = y.det();
  double disc = tr * tr / 4.0 - de;
  if (disc < 0) disc = 0;
  return tr / 2.0 - std::sqrt(disc);
}

Mat2d sqrt_spd(const Mat2d& y) {
  if (!is_positive_definite(y)) throw std::domain_error("sqrt_spd: matrix not SPD");
  double sd = std::sqrt(y.det());
  double s = std::sqrt(y.trace() + 2.0 * sd);
  Mat2d r = (y + Mat2d::identity() * sd) * (1.0 / s);
  return r;
}

bool is_symplectic(const Mat4d& g, double tol) {
  Mat4d J = Mat4d::symplectic_form();
  Mat4d r = g.transposed() * J * g - J;
  double scale = max_abs(g);
  return max_abs(r) <= tol * std::max(1.0, scale * scale);
}

bool is_symplectic_exact(const Mat4<Rat>& g) {
  Mat4<Rat> J = Mat4<Rat>::symplectic_form();
  return g.transposed() * J * g == J;
}

Mat2c moebius_act_complex(const Mat4d& g, const Mat2c& tau) {
  Mat2c a = complexify(g.a()), b = complexify(g.b());
  Mat2c c = complexify(g.c()), d = complexify(g.d());
  Mat2c den = c * tau + d;
  std::complex<double> det = den.det();
  if (std::abs(det) < 1e-300)
    throw std::domain_error("moebius_act: singular c tau + d");
  Mat2c r = (a * tau + b) * den.inverse();
  // symmetrize away roundoff
  std::complex<double> off = (r(0, 1) + r(1, 0)) / 2.0;
  r(0, 1) = off;
  r(1, 0) = off;
  return r;
}

SiegelPoint moebius_act(const Mat4d& g, const SiegelPoint& tau) {
  Mat2c r = moebius_act_complex(g, tau.tau());
  Mat2d xr = map_mat2(r, [](std::complex<double> z) { return z.real(); });
  Mat2d yr = map_mat2(r, [](std::complex<double> z) { return z.imag(); });
  return SiegelPoint(xr, yr);
}

Mat2c cocycle(const Mat4d& g, const SiegelPoint& tau) {
  return complexify(g.c()) * tau.tau() + complexify(g.d());
}

Mat4d base_point_transfer(const SiegelPoint& tau) {
  Mat2d s = sqrt_spd(tau.y);
  Mat2d si = s.inverse();
  return Mat4d::from_blocks(s, tau.x * si, Mat2d::zero(), si);
}

Mat4d translation(const Mat2d& b) {
  return Mat4d::from_blocks(Mat2d::identity(), b, Mat2d::zero(), Mat2d::identity());
}

Mat4d gl_embed(const Mat2d& u) {
  return Mat4d::from_blocks(u, Mat2d::zero(), Mat2d::zero(), u.inverse().transposed());
}

Mat4d inversion() { return Mat4d::symplectic_form(); }

Mat4<Rat> translation_q(const Mat2<Rat>& b) {
  return Mat4<Rat>::from_blocks(Mat2<Rat>::identity(), b, Mat2<Rat>::zero(),
                                Mat2<Rat>::identity());
}

Mat4<Rat> gl_embed_q(const Mat2<Rat>& u) {
  return Mat4<Rat>::from_blocks(u, Mat2<Rat>::zero(), Mat2<Rat>::zero(),
                                u.inverse().transposed());
}

Mat4<Rat> inversion_q() { return Mat4<Rat>::symplectic_form(); }

}  // namespace siegel
