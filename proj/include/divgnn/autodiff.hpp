#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "divgnn/matrix.hpp"

namespace divgnn::ad {

// One node of the reverse-mode tape. Nodes form a DAG through `parents`;
// `back` pulls this node's grad into its parents. Leaves created through a
// ParamStore persist across tapes and accumulate gradients until the
// optimizer clears them.
struct Node {
  Matrix val;
  Matrix grad;  // same shape as val, zero-initialized
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void()> back;

  explicit Node(Matrix v, bool req)
      : val(std::move(v)), grad(val.rows, val.cols), requires_grad(req) {}
};

using Value = std::shared_ptr<Node>;

Value leaf(Matrix v, bool requires_grad = true);
Value constant(Matrix v);
Value scalar(double v);  // 1x1 constant

// Elementwise binaries accept equal shapes, a 1x1 operand (scalar
// broadcast), or a 1xC row against an NxC matrix (row broadcast).
Value add(const Value& x, const Value& y);
Value sub(const Value& x, const Value& y);
Value mul(const Value& x, const Value& y);
Value div(const Value& x, const Value& y);

Value add_const(const Value& x, double c);
Value scale_const(const Value& x, double c);

Value matmul(const Value& x, const Value& y);
Value relu(const Value& x);
Value sigmoid(const Value& x);
// elementwise sqrt; the derivative at exactly 0 is taken as 0 so that
// standardizing a constant vector stays finite
Value sqrt_v(const Value& x);

Value sum_all(const Value& x);                  // -> 1x1
Value col_sum(const Value& x);                  // NxC -> 1xC
Value col_mean(const Value& x);                 // NxC -> 1xC
Value col_max(const Value& x);                  // NxC -> 1xC, first argmax wins
Value concat_cols(const std::vector<Value>& xs);  // equal rows
Value concat_rows(const std::vector<Value>& xs);  // equal cols
Value row_slice(const Value& x, std::size_t r0, std::size_t r1);

// U diag(f) U^T for a constant eigenbasis U and a differentiable response
// vector f (n x 1). d/df_i = diag(U^T G U)_i.
Value u_diag_ut(const Matrix& u, const Value& f);

// Stable log-sum-exp cross-entropy on a 1xC logit row.
Value cross_entropy_logits(const Value& logits, int cls);
// |pred - target| on a 1x1 prediction
Value l1_loss(const Value& pred, double target);

// Reverse pass from a 1x1 root; seeds d(root)/d(root) = seed and visits each
// reachable node exactly once in reverse topological order.
void backward(const Value& root, double seed = 1.0);

}  // namespace divgnn::ad
