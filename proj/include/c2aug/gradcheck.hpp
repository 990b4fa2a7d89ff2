#pragma once

#include <functional>
#include <map>
#include <string>

#include "c2aug/params.hpp"

namespace c2aug {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
};

// Central-difference check of analytic gradients.
//
// eval_loss evaluates the scalar objective at the current parameter values
// (it must be a deterministic function of them — freeze any randomness).
// eval_grads returns the analytic gradient per parameter name at the current
// values. Reported error per component is
//   |analytic - central| / max(1, |analytic|).
// Throws on non-finite evaluations.
GradCheckReport finite_diff_check(ParamStore& params,
                                  const std::function<double()>& eval_loss,
                                  const std::function<std::map<std::string, Tensor>()>& eval_grads,
                                  double step);

}  // namespace c2aug
