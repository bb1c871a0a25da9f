#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "divgnn/autodiff.hpp"
#include "divgnn/rng.hpp"

namespace divgnn {

struct TrainConfig {
  int batch_size = 50;
  double lr = 0.0007;
  int lr_halve_every = 200;
  int epochs = 400;
  std::uint64_t seed = 0;
  int hidden = 64;
  int conv_layers = 2;

  void validate() const;  // all positive, input_error otherwise
};

// lr(epoch) = lr * 0.5^floor(epoch / halve_every), epoch 0-based
double lr_at(const TrainConfig& c, int epoch);

// uniform in +-sqrt(6 / (fan_in + fan_out))
Matrix glorot_uniform(Rng& rng, std::size_t fan_in, std::size_t fan_out);

// Named trainable parameters with Adam state. Iteration order is the map's
// key order, which keeps every run's update order deterministic.
struct ParamStore {
  std::map<std::string, ad::Value> params;

  ad::Value add(const std::string& name, Matrix init);
  ad::Value get(const std::string& name) const;
  bool contains(const std::string& name) const { return params.count(name) > 0; }
  std::size_t total_coords() const;

  // Called after each backward pass; adam_step refuses to run without at
  // least one since the previous step.
  void note_backward() { pending_ = true; }
  bool has_pending() const { return pending_; }

  // Standard Adam (beta1 0.9, beta2 0.999, eps 1e-8); clears gradients.
  // Throws state_error when no backward pass is pending.
  void adam_step(double lr);
  void zero_grads();

 private:
  std::map<std::string, Matrix> m_, v_;
  long step_ = 0;
  bool pending_ = false;
};

}  // namespace divgnn
