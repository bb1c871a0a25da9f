#include "divgnn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "divgnn/errors.hpp"

namespace divgnn::ad {

namespace {

bool any_requires(const std::vector<Value>& xs) {
  for (const auto& x : xs)
    if (x->requires_grad) return true;
  return false;
}

Value make(Matrix v, std::vector<Value> parents) {
  bool req = any_requires(parents);
  auto n = std::make_shared<Node>(std::move(v), req);
  n->parents = std::move(parents);
  return n;
}

enum class Bcast { same, y_scalar, x_scalar, y_row, x_row };

Bcast broadcast_kind(const Matrix& x, const Matrix& y, const char* op) {
  if (x.same_shape(y)) return Bcast::same;
  if (y.is_scalar()) return Bcast::y_scalar;
  if (x.is_scalar()) return Bcast::x_scalar;
  if (y.rows == 1 && y.cols == x.cols) return Bcast::y_row;
  if (x.rows == 1 && x.cols == y.cols) return Bcast::x_row;
  throw input_error(std::string(op) + ": incompatible shapes");
}

double bval(const Matrix& m, Bcast kind, bool is_x, std::size_t i, std::size_t j) {
  bool broadcast = (is_x && (kind == Bcast::x_scalar || kind == Bcast::x_row)) ||
                   (!is_x && (kind == Bcast::y_scalar || kind == Bcast::y_row));
  if (!broadcast) return m(i, j);
  if (m.is_scalar()) return m(0, 0);
  return m(0, j);  // row broadcast
}

// accumulate contribution g at (i, j) into the (possibly broadcast) operand
void bacc(Matrix& grad, Bcast kind, bool is_x, std::size_t i, std::size_t j, double g) {
  bool broadcast = (is_x && (kind == Bcast::x_scalar || kind == Bcast::x_row)) ||
                   (!is_x && (kind == Bcast::y_scalar || kind == Bcast::y_row));
  if (!broadcast) grad(i, j) += g;
  else if (grad.is_scalar()) grad(0, 0) += g;
  else grad(0, j) += g;
}

Matrix out_shape(const Matrix& x, const Matrix& y, Bcast kind) {
  if (kind == Bcast::x_scalar || kind == Bcast::x_row) return Matrix(y.rows, y.cols);
  return Matrix(x.rows, x.cols);
}

}  // namespace

Value leaf(Matrix v, bool requires_grad) {
  return std::make_shared<Node>(std::move(v), requires_grad);
}

Value constant(Matrix v) { return leaf(std::move(v), false); }

Value scalar(double v) { return constant(Matrix(1, 1, v)); }

// shared skeleton for the broadcast-aware elementwise binaries
template <typename Fwd, typename Bwd>
static Value elementwise(const Value& x, const Value& y, const char* op, Fwd fwd, Bwd bwd) {
  Bcast kind = broadcast_kind(x->val, y->val, op);
  Matrix out = out_shape(x->val, y->val, kind);
  for (std::size_t i = 0; i < out.rows; ++i)
    for (std::size_t j = 0; j < out.cols; ++j)
      out(i, j) = fwd(bval(x->val, kind, true, i, j), bval(y->val, kind, false, i, j));
  Value n = make(std::move(out), {x, y});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    Node* yp = y.get();
    n->back = [np, xp, yp, kind, bwd]() {
      for (std::size_t i = 0; i < np->val.rows; ++i)
        for (std::size_t j = 0; j < np->val.cols; ++j) {
          double g = np->grad(i, j);
          if (g == 0.0) continue;
          double xv = bval(xp->val, kind, true, i, j);
          double yv = bval(yp->val, kind, false, i, j);
          auto [dx, dy] = bwd(xv, yv);
          if (xp->requires_grad) bacc(xp->grad, kind, true, i, j, g * dx);
          if (yp->requires_grad) bacc(yp->grad, kind, false, i, j, g * dy);
        }
    };
  }
  return n;
}

Value add(const Value& x, const Value& y) {
  return elementwise(x, y, "add", [](double a, double b) { return a + b; },
                     [](double, double) { return std::pair{1.0, 1.0}; });
}

Value sub(const Value& x, const Value& y) {
  return elementwise(x, y, "sub", [](double a, double b) { return a - b; },
                     [](double, double) { return std::pair{1.0, -1.0}; });
}

Value mul(const Value& x, const Value& y) {
  return elementwise(x, y, "mul", [](double a, double b) { return a * b; },
                     [](double a, double b) { return std::pair{b, a}; });
}

Value div(const Value& x, const Value& y) {
  return elementwise(x, y, "div", [](double a, double b) { return a / b; },
                     [](double a, double b) { return std::pair{1.0 / b, -a / (b * b)}; });
}

Value add_const(const Value& x, double c) {
  Matrix out = x->val;
  for (double& v : out.a) v += c;
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp]() {
      for (std::size_t i = 0; i < np->grad.size(); ++i) xp->grad.a[i] += np->grad.a[i];
    };
  }
  return n;
}

Value scale_const(const Value& x, double c) {
  Matrix out = scale(x->val, c);
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp, c]() {
      for (std::size_t i = 0; i < np->grad.size(); ++i) xp->grad.a[i] += c * np->grad.a[i];
    };
  }
  return n;
}

Value matmul(const Value& x, const Value& y) {
  Matrix out = divgnn::matmul(x->val, y->val);
  Value n = make(std::move(out), {x, y});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    Node* yp = y.get();
    n->back = [np, xp, yp]() {
      if (xp->requires_grad) {
        Matrix gx = divgnn::matmul(np->grad, transpose(yp->val));
        for (std::size_t i = 0; i < gx.size(); ++i) xp->grad.a[i] += gx.a[i];
      }
      if (yp->requires_grad) {
        Matrix gy = divgnn::matmul(transpose(xp->val), np->grad);
        for (std::size_t i = 0; i < gy.size(); ++i) yp->grad.a[i] += gy.a[i];
      }
    };
  }
  return n;
}

Value relu(const Value& x) {
  Matrix out = x->val;
  for (double& v : out.a) v = v > 0.0 ? v : 0.0;
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp]() {
      for (std::size_t i = 0; i < np->grad.size(); ++i)
        if (xp->val.a[i] > 0.0) xp->grad.a[i] += np->grad.a[i];
    };
  }
  return n;
}

Value sigmoid(const Value& x) {
  Matrix out = x->val;
  for (double& v : out.a) {
    if (v >= 0.0) v = 1.0 / (1.0 + std::exp(-v));
    else {
      double e = std::exp(v);
      v = e / (1.0 + e);
    }
  }
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp]() {
      for (std::size_t i = 0; i < np->grad.size(); ++i) {
        double s = np->val.a[i];
        xp->grad.a[i] += np->grad.a[i] * s * (1.0 - s);
      }
    };
  }
  return n;
}

Value sqrt_v(const Value& x) {
  Matrix out = x->val;
  for (double& v : out.a) v = std::sqrt(v);
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp]() {
      for (std::size_t i = 0; i < np->grad.size(); ++i) {
        double s = np->val.a[i];
        if (s > 0.0) xp->grad.a[i] += np->grad.a[i] * 0.5 / s;
      }
    };
  }
  return n;
}

Value sum_all(const Value& x) {
  double s = 0.0;
  for (double v : x->val.a) s += v;
  Value n = make(Matrix(1, 1, s), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp]() {
      double g = np->grad(0, 0);
      for (std::size_t i = 0; i < xp->grad.size(); ++i) xp->grad.a[i] += g;
    };
  }
  return n;
}

Value col_sum(const Value& x) {
  Matrix out(1, x->val.cols);
  for (std::size_t i = 0; i < x->val.rows; ++i)
    for (std::size_t j = 0; j < x->val.cols; ++j) out(0, j) += x->val(i, j);
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp]() {
      for (std::size_t i = 0; i < xp->grad.rows; ++i)
        for (std::size_t j = 0; j < xp->grad.cols; ++j)
          xp->grad(i, j) += np->grad(0, j);
    };
  }
  return n;
}

Value col_mean(const Value& x) {
  if (x->val.rows == 0) throw input_error("col_mean of an empty matrix");
  return scale_const(col_sum(x), 1.0 / double(x->val.rows));
}

Value col_max(const Value& x) {
  if (x->val.rows == 0) throw input_error("col_max of an empty matrix");
  Matrix out(1, x->val.cols);
  std::vector<std::size_t> arg(x->val.cols, 0);
  for (std::size_t j = 0; j < x->val.cols; ++j) {
    double best = x->val(0, j);
    for (std::size_t i = 1; i < x->val.rows; ++i)
      if (x->val(i, j) > best) { best = x->val(i, j); arg[j] = i; }
    out(0, j) = best;
  }
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp, arg]() {
      for (std::size_t j = 0; j < np->grad.cols; ++j)
        xp->grad(arg[j], j) += np->grad(0, j);
    };
  }
  return n;
}

Value concat_cols(const std::vector<Value>& xs) {
  if (xs.empty()) throw input_error("concat_cols of nothing");
  std::size_t rows = xs[0]->val.rows, cols = 0;
  for (const auto& x : xs) {
    if (x->val.rows != rows) throw input_error("concat_cols: row mismatch");
    cols += x->val.cols;
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < x->val.cols; ++j) out(i, off + j) = x->val(i, j);
    off += x->val.cols;
  }
  Value n = make(std::move(out), xs);
  if (n->requires_grad) {
    Node* np = n.get();
    std::vector<Node*> ps;
    for (const auto& x : xs) ps.push_back(x.get());
    n->back = [np, ps]() {
      std::size_t off = 0;
      for (Node* p : ps) {
        if (p->requires_grad)
          for (std::size_t i = 0; i < p->grad.rows; ++i)
            for (std::size_t j = 0; j < p->grad.cols; ++j)
              p->grad(i, j) += np->grad(i, off + j);
        off += p->val.cols;
      }
    };
  }
  return n;
}

Value concat_rows(const std::vector<Value>& xs) {
  if (xs.empty()) throw input_error("concat_rows of nothing");
  std::size_t cols = xs[0]->val.cols, rows = 0;
  for (const auto& x : xs) {
    if (x->val.cols != cols) throw input_error("concat_rows: column mismatch");
    rows += x->val.rows;
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < x->val.rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) out(off + i, j) = x->val(i, j);
    off += x->val.rows;
  }
  Value n = make(std::move(out), xs);
  if (n->requires_grad) {
    Node* np = n.get();
    std::vector<Node*> ps;
    for (const auto& x : xs) ps.push_back(x.get());
    n->back = [np, ps]() {
      std::size_t off = 0;
      for (Node* p : ps) {
        if (p->requires_grad)
          for (std::size_t i = 0; i < p->grad.rows; ++i)
            for (std::size_t j = 0; j < p->grad.cols; ++j)
              p->grad(i, j) += np->grad(off + i, j);
        off += p->val.rows;
      }
    };
  }
  return n;
}

Value row_slice(const Value& x, std::size_t r0, std::size_t r1) {
  if (r0 > r1 || r1 > x->val.rows) throw input_error("row_slice: bad range");
  Matrix out(r1 - r0, x->val.cols);
  for (std::size_t i = r0; i < r1; ++i)
    for (std::size_t j = 0; j < x->val.cols; ++j) out(i - r0, j) = x->val(i, j);
  Value n = make(std::move(out), {x});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* xp = x.get();
    n->back = [np, xp, r0]() {
      for (std::size_t i = 0; i < np->grad.rows; ++i)
        for (std::size_t j = 0; j < np->grad.cols; ++j)
          xp->grad(r0 + i, j) += np->grad(i, j);
    };
  }
  return n;
}

Value u_diag_ut(const Matrix& u, const Value& f) {
  const std::size_t n = u.rows;
  if (u.cols != n) throw input_error("u_diag_ut: U must be square");
  if (f->val.rows != n || f->val.cols != 1)
    throw input_error("u_diag_ut: response must be n x 1");
  Matrix scaled = u;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) scaled(i, k) *= f->val(k, 0);
  Value out = make(divgnn::matmul(scaled, transpose(u)), {f});
  if (out->requires_grad) {
    Node* np = out.get();
    Node* fp = f.get();
    Matrix ucopy = u;
    np->back = [np, fp, ucopy]() {
      // d/df_k = u_k^T G u_k
      const std::size_t n = ucopy.rows;
      Matrix gu = divgnn::matmul(np->grad, ucopy);  // n x n
      for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += ucopy(i, k) * gu(i, k);
        fp->grad(k, 0) += acc;
      }
    };
  }
  return out;
}

Value cross_entropy_logits(const Value& logits, int cls) {
  const Matrix& l = logits->val;
  if (l.rows != 1) throw input_error("cross_entropy: logits must be a row");
  if (cls < 0 || cls >= (int)l.cols) throw input_error("cross_entropy: class out of range");
  double m = l(0, 0);
  for (std::size_t j = 1; j < l.cols; ++j) m = std::max(m, l(0, j));
  double z = 0.0;
  for (std::size_t j = 0; j < l.cols; ++j) z += std::exp(l(0, j) - m);
  double lse = m + std::log(z);
  Value n = make(Matrix(1, 1, lse - l(0, (std::size_t)cls)), {logits});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* lp = logits.get();
    n->back = [np, lp, cls, m, z]() {
      double g = np->grad(0, 0);
      for (std::size_t j = 0; j < lp->val.cols; ++j) {
        double p = std::exp(lp->val(0, j) - m) / z;
        lp->grad(0, j) += g * (p - ((int)j == cls ? 1.0 : 0.0));
      }
    };
  }
  return n;
}

Value l1_loss(const Value& pred, double target) {
  if (!pred->val.is_scalar()) throw input_error("l1_loss: prediction must be 1x1");
  double diff = pred->val(0, 0) - target;
  Value n = make(Matrix(1, 1, std::fabs(diff)), {pred});
  if (n->requires_grad) {
    Node* np = n.get();
    Node* pp = pred.get();
    n->back = [np, pp, diff]() {
      double s = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      pp->grad(0, 0) += np->grad(0, 0) * s;
    };
  }
  return n;
}

void backward(const Value& root, double seed) {
  if (!root->val.is_scalar())
    throw input_error("backward: root must be a scalar");
  // iterative post-order DFS; each node enters `order` exactly once
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.push_back({root.get(), 0});
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      Node* p = node->parents[next++].get();
      if (visited.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  root->grad(0, 0) += seed;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->back && (*it)->requires_grad) (*it)->back();
}

}  // namespace divgnn::ad
