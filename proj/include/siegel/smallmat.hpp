#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace siegel {

// Fixed-size 2x2 matrix over an arbitrary (commutative) scalar ring.
template <typename T>
struct Mat2 {
  std::array<T, 4> e{};  // row-major

  Mat2() = default;
  Mat2(T a, T b, T c, T d) : e{std::move(a), std::move(b), std::move(c), std::move(d)} {}

  static Mat2 zero() { return {}; }
  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static Mat2 diag(T a, T d) { return {std::move(a), T(0), T(0), std::move(d)}; }
  // symmetric [[a, b], [b, d]]
  static Mat2 sym(T a, T b, T d) { return {a, b, b, std::move(d)}; }

  T& operator()(int i, int j) { return e[2 * i + j]; }
  const T& operator()(int i, int j) const { return e[2 * i + j]; }

  Mat2 operator+(const Mat2& o) const {
    return {e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]};
  }
  Mat2 operator-(const Mat2& o) const {
    return {e[0] - o.e[0], e[1] - o.e[1], e[2] - o.e[2], e[3] - o.e[3]};
  }
  Mat2 operator-() const { return {-e[0], -e[1], -e[2], -e[3]}; }
  Mat2 operator*(const Mat2& o) const {
    return {e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
            e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]};
  }
  Mat2 operator*(const T& s) const { return {e[0] * s, e[1] * s, e[2] * s, e[3] * s}; }

  bool operator==(const Mat2& o) const { return e == o.e; }

  Mat2 transposed() const { return {e[0], e[2], e[1], e[3]}; }
  T trace() const { return e[0] + e[3]; }
  T det() const { return e[0] * e[3] - e[1] * e[2]; }
  // adjugate: adj(M) * M = det(M) * I
  Mat2 adjugate() const { return {e[3], -e[1], -e[2], e[0]}; }
  Mat2 inverse() const {
    T d = det();
    return {e[3] / d, -e[1] / d, -e[2] / d, e[0] / d};
  }

  bool is_symmetric() const { return e[1] == e[2]; }
};

template <typename T>
Mat2<T> operator*(const T& s, const Mat2<T>& m) {
  return m * s;
}

// Fixed-size 4x4 matrix with 2x2 block access, used for Sp(4) elements.
template <typename T>
struct Mat4 {
  std::array<T, 16> e{};

  Mat4() = default;

  static Mat4 zero() { return {}; }
  static Mat4 identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = T(1);
    return m;
  }
  // the standard symplectic form (0 -I; I 0)
  static Mat4 symplectic_form() {
    Mat4 m;
    m(0, 2) = T(-1);
    m(1, 3) = T(-1);
    m(2, 0) = T(1);
    m(3, 1) = T(1);
    return m;
  }
  static Mat4 from_blocks(const Mat2<T>& a, const Mat2<T>& b, const Mat2<T>& c,
                          const Mat2<T>& d) {
    Mat4 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        m(i, j) = a(i, j);
        m(i, j + 2) = b(i, j);
        m(i + 2, j) = c(i, j);
        m(i + 2, j + 2) = d(i, j);
      }
    return m;
  }

  T& operator()(int i, int j) { return e[4 * i + j]; }
  const T& operator()(int i, int j) const { return e[4 * i + j]; }

  Mat2<T> block(int bi, int bj) const {
    Mat2<T> m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = (*this)(2 * bi + i, 2 * bj + j);
    return m;
  }
  Mat2<T> a() const { return block(0, 0); }
  Mat2<T> b() const { return block(0, 1); }
  Mat2<T> c() const { return block(1, 0); }
  Mat2<T> d() const { return block(1, 1); }

  Mat4 operator+(const Mat4& o) const {
    Mat4 m;
    for (int i = 0; i < 16; ++i) m.e[i] = e[i] + o.e[i];
    return m;
  }
  Mat4 operator-(const Mat4& o) const {
    Mat4 m;
    for (int i = 0; i < 16; ++i) m.e[i] = e[i] - o.e[i];
    return m;
  }
  Mat4 operator-() const {
    Mat4 m;
    for (int i = 0; i < 16; ++i) m.e[i] = -e[i];
    return m;
  }
  Mat4 operator*(const Mat4& o) const {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        T s = e[4 * i] * o.e[j];
        for (int k = 1; k < 4; ++k) s = s + e[4 * i + k] * o.e[4 * k + j];
        m(i, j) = s;
      }
    return m;
  }
  Mat4 operator*(const T& s) const {
    Mat4 m;
    for (int i = 0; i < 16; ++i) m.e[i] = e[i] * s;
    return m;
  }

  bool operator==(const Mat4& o) const { return e == o.e; }

  Mat4 transposed() const {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = (*this)(j, i);
    return m;
  }
};

template <typename T, typename F>
auto map_mat2(const Mat2<T>& m, F f) -> Mat2<decltype(f(m.e[0]))> {
  return {f(m.e[0]), f(m.e[1]), f(m.e[2]), f(m.e[3])};
}

template <typename T, typename F>
auto map_mat4(const Mat4<T>& m, F f) -> Mat4<decltype(f(m.e[0]))> {
  Mat4<decltype(f(m.e[0]))> r;
  for (int i = 0; i < 16; ++i) r.e[i] = f(m.e[i]);
  return r;
}

// Minimal dense dynamic matrix; exact scalars are the main use case so we keep
// it free of floating-point assumptions.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("Matrix product shape mismatch");
    Matrix m(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& x = (*this)(i, k);
        if (x == T(0)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) m(i, j) += x * o(k, j);
      }
    return m;
  }

  std::vector<T> operator*(const std::vector<T>& v) const {
    if (cols_ != v.size()) throw std::invalid_argument("Matrix-vector shape mismatch");
    std::vector<T> r(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
  }

  Matrix transposed() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

template <typename T, typename U, typename F>
Matrix<U> convert_matrix(const Matrix<T>& m, F f) {
  Matrix<U> r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = f(m(i, j));
  return r;
}

using Mat2d = Mat2<double>;
using Mat2c = Mat2<std::complex<double>>;
using Mat4d = Mat4<double>;

inline Mat2c complexify(const Mat2d& m) {
  return map_mat2(m, [](double v) { return std::complex<double>(v, 0.0); });
}

inline double max_abs(const Mat2d& m) {
  double r = 0;
  for (double v : m.e) r = std::max(r, std::fabs(v));
  return r;
}

inline double max_abs(const Mat4d& m) {
  double r = 0;
  for (double v : m.e) r = std::max(r, std::fabs(v));
  return r;
}

}  // namespace siegel
