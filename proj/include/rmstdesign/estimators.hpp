#pragma once

#include <cstddef>
#include <vector>

#include "rmstdesign/dataset.hpp"
#include "rmstdesign/step_function.hpp"

namespace rmst {

// What to do when tau lies beyond the last observed time while the curve is
// still positive there: refuse (default) or carry the last value forward.
enum class TauPolicy { Error, Extend };

// Product-limit estimator. Jumps only at distinct event times; subjects
// censored at t remain in the risk set for events at t.
StepFunction kaplan_meier(const std::vector<double>& times,
                          const std::vector<int>& events);

// Cumulative-hazard estimator with the same risk-set convention.
StepFunction nelson_aalen(const std::vector<double>& times,
                          const std::vector<int>& events);

// Reversed Kaplan-Meier for the censoring survival function G: censorings act
// as events, failures as censored observations. Subjects failing at t stay in
// the risk set for censorings at t.
StepFunction censoring_km(const std::vector<double>& times,
                          const std::vector<int>& events);

// Exact area under the step function on [0, tau]; a finite sum of
// width x height terms.
double rmst_integral(const StepFunction& s, double tau,
                     TauPolicy policy = TauPolicy::Error);

// Exact integral over [t, tau], computed as the difference of prefix areas so
// that integral(0,t) + integral(t,tau) reproduces integral(0,tau).
double rmst_tail_integral(const StepFunction& s, double t, double tau,
                          TauPolicy policy = TauPolicy::Error);

struct RmstFit {
  double tau = 0.0;
  double theta_treatment = 0.0;  // arm Z=1
  double theta_control = 0.0;    // arm Z=0
  double theta_diff = 0.0;
  // Both estimate the variance of sqrt(n)(theta_diff - theta); the standard
  // error of theta_diff is sqrt(var/n).
  double var_plugin = 0.0;     // knot-sum form
  double var_influence = 0.0;  // n^{-1} sum H_i^2
  std::vector<double> influence;  // H_i in dataset order
  std::size_t n = 0, n_treatment = 0, n_control = 0;

  double std_error(bool influence_form = true) const;
};

// Per-arm RMST difference with both variance estimators and per-subject
// influence values.
RmstFit rmst_fit(const SurvivalDataset& d, double tau,
                 TauPolicy policy = TauPolicy::Error);

// Per-subject martingale integrals h_i = int_0^tau [A(t)/Ybar(t)] dMhat_i(t)
// for a single sample, where A(t) is the tail RMST of the sample's KM curve
// and Ybar(t) is the at-risk count over n_ref. Within the sample the h_i sum
// to zero. Building block for the influence values and for the pooled
// residuals of the augmentation path.
std::vector<double> martingale_integrals(const std::vector<double>& times,
                                         const std::vector<int>& events,
                                         double tau, double n_ref,
                                         TauPolicy policy = TauPolicy::Error);

}  // namespace rmst
