#include "c2aug/gradcheck.hpp"

#include <cmath>

namespace c2aug {

GradCheckReport finite_diff_check(
    ParamStore& params, const std::function<double()>& eval_loss,
    const std::function<std::map<std::string, Tensor>()>& eval_grads, double step) {
  if (step <= 0.0) throw Error("finite_diff_check: step must be positive");
  const std::map<std::string, Tensor> analytic = eval_grads();
  GradCheckReport report;
  for (auto& [name, tensor] : params) {
    auto it = analytic.find(name);
    if (it == analytic.end()) throw Error("finite_diff_check: missing gradient for " + name);
    const Tensor& g = it->second;
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const double saved = tensor[i];
      tensor[i] = saved + step;
      const double up = eval_loss();
      tensor[i] = saved - step;
      const double down = eval_loss();
      tensor[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw Error("finite_diff_check: non-finite evaluation at " + name);
      const double central = (up - down) / (2.0 * step);
      const double rel = std::abs(g[i] - central) / std::max(1.0, std::abs(g[i]));
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

}  // namespace c2aug
