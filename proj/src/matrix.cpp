#include "divgnn/matrix.hpp"

#include <cmath>

#include "divgnn/errors.hpp"

namespace divgnn {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw input_error("matmul: inner dimensions disagree");
  Matrix out(x.rows, y.cols);
  // i-k-j order keeps the inner loop contiguous in both y and out
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xi = &x.a[i * x.cols];
    double* oi = &out.a[i * out.cols];
    for (std::size_t k = 0; k < x.cols; ++k) {
      double v = xi[k];
      if (v == 0.0) continue;
      const double* yk = &y.a[k * y.cols];
      for (std::size_t j = 0; j < y.cols; ++j) oi[j] += v * yk[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& x) {
  Matrix out(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
  return out;
}

static void require_same_shape(const Matrix& x, const Matrix& y, const char* op) {
  if (!x.same_shape(y)) throw input_error(std::string(op) + ": shape mismatch");
}

Matrix add(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "add");
  Matrix out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] += y.a[i];
  return out;
}

Matrix sub(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "sub");
  Matrix out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] -= y.a[i];
  return out;
}

Matrix hadamard(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "hadamard");
  Matrix out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out.a[i] *= y.a[i];
  return out;
}

Matrix scale(const Matrix& x, double s) {
  Matrix out = x;
  for (double& v : out.a) v *= s;
  return out;
}

double max_abs(const Matrix& x) {
  double m = 0.0;
  for (double v : x.a) m = std::max(m, std::fabs(v));
  return m;
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  require_same_shape(x, y, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    m = std::max(m, std::fabs(x.a[i] - y.a[i]));
  return m;
}

double frobenius(const Matrix& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

double offdiag_frobenius(const Matrix& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j)
      if (i != j) s += x(i, j) * x(i, j);
  return std::sqrt(s);
}

}  // namespace divgnn
