#include "divgnn/optim.hpp"

#include <cmath>

#include "divgnn/errors.hpp"

namespace divgnn {

void TrainConfig::validate() const {
  if (batch_size <= 0 || lr <= 0.0 || lr_halve_every <= 0 || epochs <= 0 ||
      hidden <= 0 || conv_layers <= 0)
    throw input_error("training configuration values must be positive");
}

double lr_at(const TrainConfig& c, int epoch) {
  return c.lr * std::pow(0.5, double(epoch / c.lr_halve_every));
}

Matrix glorot_uniform(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
  double s = std::sqrt(6.0 / double(fan_in + fan_out));
  Matrix m(fan_in, fan_out);
  for (double& v : m.a) v = rng.unif(-s, s);
  return m;
}

ad::Value ParamStore::add(const std::string& name, Matrix init) {
  if (params.count(name)) throw state_error("duplicate parameter name " + name);
  auto v = ad::leaf(std::move(init), true);
  params[name] = v;
  m_[name] = Matrix(v->val.rows, v->val.cols);
  v_[name] = Matrix(v->val.rows, v->val.cols);
  return v;
}

ad::Value ParamStore::get(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw state_error("unknown parameter " + name);
  return it->second;
}

std::size_t ParamStore::total_coords() const {
  std::size_t n = 0;
  for (const auto& [k, v] : params) n += v->val.size();
  return n;
}

void ParamStore::adam_step(double lr) {
  if (!pending_)
    throw state_error("adam_step without a pending backward pass");
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++step_;
  double c1 = 1.0 - std::pow(b1, double(step_));
  double c2 = 1.0 - std::pow(b2, double(step_));
  for (auto& [name, p] : params) {
    Matrix& m = m_[name];
    Matrix& v = v_[name];
    for (std::size_t i = 0; i < p->val.size(); ++i) {
      double g = p->grad.a[i];
      m.a[i] = b1 * m.a[i] + (1.0 - b1) * g;
      v.a[i] = b2 * v.a[i] + (1.0 - b2) * g * g;
      double mhat = m.a[i] / c1;
      double vhat = v.a[i] / c2;
      p->val.a[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
  zero_grads();
  pending_ = false;
}

void ParamStore::zero_grads() {
  for (auto& [name, p] : params)
    for (double& g : p->grad.a) g = 0.0;
}

}  // namespace divgnn
