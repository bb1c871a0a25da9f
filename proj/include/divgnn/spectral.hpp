#pragma once

#include <vector>

#include "divgnn/matrix.hpp"

namespace divgnn {

struct EigenPair {
  std::vector<double> lambda;  // ascending
  Matrix U;                    // orthonormal columns, column i pairs lambda[i]
};

struct HighPassParams {
  double p = 1.0;  // magnitude
  double e = 1.0;  // cut-off
  // a is undocumented upstream; by default it aliases e, an independent value
  // can be configured explicitly.
  bool a_independent = false;
  double a = 1.0;
  bool learnable = true;  // p and e trainable (a only when independent)

  double a_value() const { return a_independent ? a : e; }
  // filter response at frequency lambda
  double response(double lambda) const { return p * (e * lambda + 1.0 - 2.0 * a_value()); }
};

// D^{-1/2} (A + I) D^{-1/2} with D from the self-loop augmented adjacency.
// Input must be a symmetric 0/1 adjacency without self-loops.
Matrix normalized_adjacency(const Matrix& adj);

// I - D^{-1/2} A D^{-1/2}; zero-degree nodes use a 0 scaling entry, which
// leaves their diagonal at 1.
Matrix normalized_laplacian(const Matrix& adj);

// Cyclic Jacobi on a dense symmetric matrix. Off-diagonal Frobenius
// threshold 1e-12 * n, cap of 100 sweeps (numeric_error beyond it).
// Eigenvalues ascend; each eigenvector column is sign-fixed so its
// largest-magnitude entry is positive.
EigenPair sym_eigendecompose(const Matrix& m);

// U diag(f(lambda)) U^T for an arbitrary response f sampled on the spectrum
Matrix synth_kernel(const EigenPair& ep, const std::vector<double>& response);

// C_high = U diag(p(e*lambda + 1 - 2a)) U^T over the normalized Laplacian
Matrix high_pass_kernel(const Matrix& adj, const HighPassParams& hp);

}  // namespace divgnn
