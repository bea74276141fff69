#include "rmstdesign/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "rmstdesign/augmentation.hpp"
#include "rmstdesign/stats.hpp"

namespace rmst {

bool TestResult::reject() const {
  return !(ci_lower <= 0.0 && 0.0 <= ci_upper);
}

TestResult rmst_test(const SurvivalDataset& d, double tau, double alpha, double pi,
                     const std::vector<std::string>& covariates, VarianceKind variance,
                     TauPolicy policy) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("rmst_test: alpha must lie in (0,1)");
  }

  TestResult r;
  if (covariates.empty()) {
    const RmstFit fit = rmst_fit(d, tau, policy);
    r.estimate = fit.theta_diff;
    r.std_error = fit.std_error(variance == VarianceKind::Influence);
    r.method = "unadjusted";
    r.n = fit.n;
  } else {
    const AugmentedFit fit = augmented_fit(select_covariates(d, covariates), tau, pi, policy);
    r.estimate = fit.theta_aug;
    r.std_error = fit.std_error();
    r.method = "augmented";
    r.n = fit.base.n;
  }

  const double z_crit = normal_quantile(1.0 - alpha / 2.0);
  if (r.std_error > 0.0) {
    r.z_value = r.estimate / r.std_error;
  } else {
    r.z_value = r.estimate == 0.0 ? 0.0
                                  : std::copysign(std::numeric_limits<double>::infinity(),
                                                  r.estimate);
  }
  r.p_value = 2.0 * (1.0 - normal_cdf(std::fabs(r.z_value)));
  r.ci_lower = r.estimate - z_crit * r.std_error;
  r.ci_upper = r.estimate + z_crit * r.std_error;
  return r;
}

}  // namespace rmst
