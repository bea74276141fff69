#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rmstdesign/dataset.hpp"
#include "rmstdesign/estimators.hpp"

namespace rmst {

struct AugmentedFit {
  RmstFit base;
  std::vector<double> c_hat;  // projection coefficients, length p
  double theta_aug = 0.0;
  double var_aug = 0.0;  // variance of sqrt(n)(theta_aug - theta)
  double pi = 0.5;       // design allocation probability used
  double observed_allocation = 0.0;  // realized treatment fraction (diagnostic)

  double std_error() const;
};

// Projection coefficients minimizing the augmented variance; the Gram matrix
// is pi(1-pi) * sum V V^T with the design pi, not the realized fraction.
std::vector<double> c_hat(const SurvivalDataset& d, double tau, double pi,
                          TauPolicy policy = TauPolicy::Error);

// Augmented difference theta - mean{(Z-pi) c.V} with its variance. With zero
// covariate arity this reduces to the unadjusted fit bit-exactly.
AugmentedFit augmented_fit(const SurvivalDataset& d, double tau, double pi,
                           TauPolicy policy = TauPolicy::Error);

// n^{-1} sum (Z_i - pi) c.V_i for a caller-supplied coefficient vector.
double augmentation_term(const SurvivalDataset& d, double pi,
                         const std::vector<double>& c);

struct E2Estimate {
  double value = 0.0;                 // the quadratic form, >= 0
  std::vector<double> cross_moments;  // E_n{m_i V_i}, length p
  std::vector<double> gram;           // n^{-1} sum V V^T, row-major p x p
  bool rank_deficient = false;        // condition number beyond the warning zone
  std::size_t p = 0;
};

// Design-stage variance-reduction estimate from single-arm or blinded data:
// pooled martingale residual integrals projected onto the covariate span.
// Never reads the arm column. Scaled so that the variance removed by the
// augmentation is exactly pi(1-pi)*e2, the form the power formula consumes;
// pi is the design allocation probability of the trial being sized.
E2Estimate e2_hat(const SurvivalDataset& d, double tau, double pi = 0.5,
                  TauPolicy policy = TauPolicy::Error);

struct SelectionStep {
  std::string added;                 // covariate appended at this step
  double e2 = 0.0;                   // cumulative value after adding it
  double predicted_power = 0.0;      // NaN when no power evaluator was given
  std::vector<std::string> skipped;  // candidates dropped at this step (singular Gram)
};

struct SelectionTrace {
  double baseline_power = 0.0;  // power with no covariates (step 0); NaN without evaluator
  std::vector<SelectionStep> steps;
};

// Greedy forward selection maximizing e2 at each step. Ties and the scan
// order follow the candidate input order. Candidates whose Gram turns
// singular are skipped with a note, not fatal. power_of_e2, when provided,
// fills the predicted-power column (supplied by the design layer).
SelectionTrace stepwise_select(const SurvivalDataset& d, double tau,
                               const std::vector<std::string>& candidates,
                               const std::function<double(double)>& power_of_e2 = {},
                               double pi = 0.5, TauPolicy policy = TauPolicy::Error);

}  // namespace rmst
