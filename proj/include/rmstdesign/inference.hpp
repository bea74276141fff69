#pragma once

#include <string>
#include <vector>

#include "rmstdesign/dataset.hpp"
#include "rmstdesign/estimators.hpp"

namespace rmst {

enum class VarianceKind { Influence, Plugin };

struct TestResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double z_value = 0.0;
  double p_value = 1.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::string method;  // "unadjusted" or "augmented"
  std::size_t n = 0;

  bool reject() const;  // 0 outside the CI; dual to p < alpha up to quantile rounding
};

// Final-analysis test of the RMST difference. With covariates the augmented
// estimator is used; otherwise the unadjusted one with the chosen variance
// form (influence by default, so the two paths differ only by the
// augmentation term).
TestResult rmst_test(const SurvivalDataset& d, double tau, double alpha, double pi,
                     const std::vector<std::string>& covariates = {},
                     VarianceKind variance = VarianceKind::Influence,
                     TauPolicy policy = TauPolicy::Error);

}  // namespace rmst
