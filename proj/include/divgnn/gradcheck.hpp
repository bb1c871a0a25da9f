#pragma once

#include <functional>
#include <map>
#include <string>

#include "divgnn/optim.hpp"

namespace divgnn {

// Central finite differences against the reverse-mode gradient. `f` must
// rebuild its tape on every call and be deterministic. Returns the maximum
// effective relative error over all coordinates of all parameters:
// coordinates where |fd - analytic| <= abs_floor count as exact.
double finite_diff_gradcheck(const std::function<ad::Value()>& f, ParamStore& params,
                             double eps = 1e-5, double abs_floor = 1e-7);

// Same check reported per parameter name.
std::map<std::string, double> finite_diff_gradcheck_by_param(
    const std::function<ad::Value()>& f, ParamStore& params, double eps = 1e-5,
    double abs_floor = 1e-7);

}  // namespace divgnn
