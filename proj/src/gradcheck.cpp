#include "divgnn/gradcheck.hpp"

#include <cmath>

namespace divgnn {

std::map<std::string, double> finite_diff_gradcheck_by_param(
    const std::function<ad::Value()>& f, ParamStore& params, double eps,
    double abs_floor) {
  params.zero_grads();
  ad::Value loss = f();
  ad::backward(loss);

  std::map<std::string, Matrix> analytic;
  for (const auto& [name, p] : params.params) analytic[name] = p->grad;
  params.zero_grads();

  std::map<std::string, double> out;
  for (auto& [name, p] : params.params) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p->val.size(); ++i) {
      double keep = p->val.a[i];
      p->val.a[i] = keep + eps;
      double up = f()->val(0, 0);
      p->val.a[i] = keep - eps;
      double dn = f()->val(0, 0);
      p->val.a[i] = keep;
      double fd = (up - dn) / (2.0 * eps);
      double an = analytic[name].a[i];
      double diff = std::fabs(fd - an);
      if (diff <= abs_floor) continue;
      double rel = diff / std::max(std::fabs(fd), std::fabs(an));
      worst = std::max(worst, rel);
    }
    out[name] = worst;
  }
  return out;
}

double finite_diff_gradcheck(const std::function<ad::Value()>& f, ParamStore& params,
                             double eps, double abs_floor) {
  double worst = 0.0;
  for (const auto& [name, err] : finite_diff_gradcheck_by_param(f, params, eps, abs_floor))
    worst = std::max(worst, err);
  return worst;
}

}  // namespace divgnn
