#pragma once

#include <cstddef>
#include <vector>

namespace divgnn {

// Dense row-major matrix of doubles. The only numeric container in the
// project; adjacencies, parameters and activations all use it.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), a(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  std::size_t size() const { return a.size(); }
  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
  bool is_scalar() const { return rows == 1 && cols == 1; }

  static Matrix identity(std::size_t n);
  static Matrix filled(std::size_t r, std::size_t c, double v) { return Matrix(r, c, v); }
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
Matrix add(const Matrix& x, const Matrix& y);
Matrix sub(const Matrix& x, const Matrix& y);
Matrix hadamard(const Matrix& x, const Matrix& y);
Matrix scale(const Matrix& x, double s);

double max_abs(const Matrix& x);
// max_ij |x_ij - y_ij|, shapes must agree
double max_abs_diff(const Matrix& x, const Matrix& y);
double frobenius(const Matrix& x);
// Frobenius norm of the off-diagonal part (square input)
double offdiag_frobenius(const Matrix& x);

}  // namespace divgnn
