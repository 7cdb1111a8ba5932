#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace siegel {

using Rat = mpq_class;

inline double to_double(const Rat& r) { return r.get_d(); }

inline std::complex<double> to_complex(const Rat& r) {
  return {r.get_d(), 0.0};
}

// Rationals with an imaginary part, enough field arithmetic for exact
// computations in the complexified symplectic Lie algebra.
struct GaussQ {
  Rat re, im;

  GaussQ() : re(0), im(0) {}
  GaussQ(long r) : re(r), im(0) {}
  GaussQ(const Rat& r) : re(r), im(0) {}
  GaussQ(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static GaussQ unit_i() { return {Rat(0), Rat(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }

  GaussQ conj() const { return {re, -im}; }
  Rat norm() const { return re * re + im * im; }

  GaussQ operator-() const { return {-re, -im}; }
  GaussQ operator+(const GaussQ& o) const { return {re + o.re, im + o.im}; }
  GaussQ operator-(const GaussQ& o) const { return {re - o.re, im - o.im}; }
  GaussQ operator*(const GaussQ& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussQ operator/(const GaussQ& o) const {
    Rat n = o.norm();
    GaussQ p = *this * o.conj();
    return {p.re / n, p.im / n};
  }
  GaussQ& operator+=(const GaussQ& o) { return *this = *this + o; }
  GaussQ& operator-=(const GaussQ& o) { return *this = *this - o; }
  GaussQ& operator*=(const GaussQ& o) { return *this = *this * o; }

  bool operator==(const GaussQ& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussQ& o) const { return !(*this == o); }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  std::string str() const {
    if (im == 0) return re.get_str();
    return re.get_str() + (im > 0 ? "+" : "") + im.get_str() + "i";
  }
};

inline GaussQ operator*(const Rat& r, const GaussQ& g) {
  return {r * g.re, r * g.im};
}

}  // namespace siegel
