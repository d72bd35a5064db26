#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "sqsim/nn/tape.hpp"

namespace sqsim::nn {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::size_t checked_coords = 0;
  std::size_t worst_param = 0;
  Eigen::Index worst_row = 0, worst_col = 0;
  double worst_ad = 0.0, worst_fd = 0.0;
};

// Central finite differences against reverse-mode gradients.
//
//   loss_fn  evaluates the loss at the params' current values (fresh tape,
//            dropout off); this is the independent route.
//   ad_grads gradients from one reverse-mode pass at the unperturbed point,
//            in the same order as `params`.
//
// Relative error per coordinate: |g_ad - g_fd| / max(1e-8, |g_ad| + |g_fd|).
// `max_coords_per_param` = 0 checks every coordinate, otherwise an evenly
// strided subset. Meaningful only at 64-bit precision.
inline GradCheckReport grad_check(
    const std::function<double()>& loss_fn,
    const std::vector<Eigen::MatrixXd*>& params,
    const std::vector<Eigen::MatrixXd>& ad_grads, double eps = 1e-5,
    std::size_t max_coords_per_param = 0) {
  if (params.size() != ad_grads.size())
    throw_runtime("grad_check: parameter/gradient count mismatch");
  GradCheckReport rep;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Eigen::MatrixXd& p = *params[k];
    const Eigen::MatrixXd& g = ad_grads[k];
    if (g.rows() != p.rows() || g.cols() != p.cols())
      throw_runtime("grad_check: gradient shape mismatch");
    const std::size_t n = static_cast<std::size_t>(p.size());
    std::size_t stride = 1;
    if (max_coords_per_param > 0 && n > max_coords_per_param)
      stride = (n + max_coords_per_param - 1) / max_coords_per_param;
    for (std::size_t idx = 0; idx < n; idx += stride) {
      double* coeff = p.data() + idx;
      const double saved = *coeff;
      *coeff = saved + eps;
      const double f_plus = loss_fn();
      *coeff = saved - eps;
      const double f_minus = loss_fn();
      *coeff = saved;
      const double fd = (f_plus - f_minus) / (2.0 * eps);
      const double ad = *(g.data() + idx);
      const double rel =
          std::abs(ad - fd) / std::max(1e-8, std::abs(ad) + std::abs(fd));
      ++rep.checked_coords;
      if (rel > rep.max_rel_err) {
        rep.max_rel_err = rel;
        rep.worst_param = k;
        rep.worst_row = static_cast<Eigen::Index>(idx) % p.rows();
        rep.worst_col = static_cast<Eigen::Index>(idx) / p.rows();
        rep.worst_ad = ad;
        rep.worst_fd = fd;
      }
    }
  }
  return rep;
}

}  // namespace sqsim::nn
