#include "divgnn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "divgnn/errors.hpp"

namespace divgnn {

namespace {

void require_adjacency(const Matrix& adj) {
  if (adj.rows != adj.cols) throw input_error("adjacency must be square");
  for (std::size_t i = 0; i < adj.rows; ++i) {
    if (adj(i, i) != 0.0) throw input_error("adjacency has a self-loop");
    for (std::size_t j = 0; j < adj.cols; ++j) {
      double v = adj(i, j);
      if (v != 0.0 && v != 1.0) throw input_error("adjacency entries must be 0/1");
      if (v != adj(j, i)) throw input_error("adjacency must be symmetric");
    }
  }
}

}  // namespace

Matrix normalized_adjacency(const Matrix& adj) {
  require_adjacency(adj);
  const std::size_t n = adj.rows;
  std::vector<double> dinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 1.0;  // self-loop
    for (std::size_t j = 0; j < n; ++j) deg += adj(i, j);
    dinv[i] = 1.0 / std::sqrt(deg);
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double a = adj(i, j) + (i == j ? 1.0 : 0.0);
      out(i, j) = dinv[i] * a * dinv[j];
    }
  return out;
}

Matrix normalized_laplacian(const Matrix& adj) {
  require_adjacency(adj);
  const std::size_t n = adj.rows;
  std::vector<double> dinv(n);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += adj(i, j);
    dinv[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = -dinv[i] * adj(i, j) * dinv[j];
    out(i, i) += 1.0;
  }
  return out;
}

EigenPair sym_eigendecompose(const Matrix& m) {
  if (m.rows != m.cols) throw input_error("eigendecompose: matrix not square");
  const std::size_t n = m.rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(m(i, j) - m(j, i)) > 1e-12)
        throw input_error("eigendecompose: matrix not symmetric within 1e-12");

  Matrix a = m;
  Matrix u = Matrix::identity(n);
  const double threshold = 1e-12 * double(n);
  const int max_sweeps = 100;

  bool converged = n < 2 || offdiag_frobenius(a) <= threshold;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        // rows/columns p and q of a (keeping symmetry), columns of u
        for (std::size_t i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double uip = u(i, p), uiq = u(i, q);
          u(i, p) = c * uip - s * uiq;
          u(i, q) = s * uip + c * uiq;
        }
      }
    }
    converged = offdiag_frobenius(a) <= threshold;
  }
  if (!converged)
    throw numeric_error("jacobi eigensolver did not converge within 100 sweeps");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  EigenPair ep;
  ep.lambda.resize(n);
  ep.U = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t src = idx[k];
    ep.lambda[k] = a(src, src);
    // sign fix: largest-magnitude entry (first on ties) made positive
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mag = std::fabs(u(i, src));
      if (mag > best) { best = mag; arg = i; }
    }
    double sgn = u(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) ep.U(i, k) = sgn * u(i, src);
  }
  return ep;
}

Matrix synth_kernel(const EigenPair& ep, const std::vector<double>& response) {
  const std::size_t n = ep.U.rows;
  if (response.size() != n) throw input_error("synth_kernel: response size != order");
  Matrix scaled = ep.U;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= response[k];
  return matmul(scaled, transpose(ep.U));
}

Matrix high_pass_kernel(const Matrix& adj, const HighPassParams& hp) {
  EigenPair ep = sym_eigendecompose(normalized_laplacian(adj));
  std::vector<double> f(ep.lambda.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = hp.response(ep.lambda[i]);
  return synth_kernel(ep, f);
}

}  // namespace divgnn
