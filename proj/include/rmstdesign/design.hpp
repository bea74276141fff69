#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmstdesign/augmentation.hpp"
#include "rmstdesign/dataset.hpp"
#include "rmstdesign/estimators.hpp"
#include "rmstdesign/step_function.hpp"

namespace rmst {

// Variance of sqrt(n) times the difference estimator under the local
// alternative, evaluated as an exact sum over the hazard increments:
//   [1/(pi(1-pi))] int_0^tau {int_t^tau S0}^2 / {S0(t-) G(t-)} dLambda0(t).
// The two-argument form takes the increments from s0 itself (-dS0/S0-); the
// three-argument form uses an explicitly supplied cumulative hazard.
double sigma_tilde_sq(const StepFunction& s0, const StepFunction& g, double tau, double pi);
double sigma_tilde_sq(const StepFunction& s0, const StepFunction& lambda0,
                      const StepFunction& g, double tau, double pi);

struct DesignInputs {
  double tau = 0.0;
  double alpha = 0.05;
  double target_power = 0.8;
  double theta_alt = 0.0;  // minimum clinically meaningful difference
  double pi = 0.5;
  double e2 = 0.0;  // 0 for the unadjusted test
  StepFunction s0 = StepFunction::constant(1.0);
  StepFunction g = StepFunction::constant(1.0);
  std::optional<StepFunction> lambda0;  // hazard increments; from s0 if absent

  // cached at construction
  double sigma_tilde = 0.0;
};

// Validates ranges and curve shapes, computes sigma_tilde_sq once, and checks
// that the augmented variance stays positive.
DesignInputs make_design_inputs(StepFunction s0, StepFunction g,
                                std::optional<StepFunction> lambda0, double tau,
                                double alpha, double target_power, double theta_alt,
                                double pi, double e2);

// Local power of the two-sided level-alpha test at sample size n; both
// normal tails retained. theta_alt = 0 gives exactly alpha.
double predicted_power(const DesignInputs& inputs, long n);

struct PowerCurve {
  std::vector<std::pair<long, double>> rows;  // (n, predicted power), n ascending
  std::optional<long> recommended_n;          // first grid point meeting target
};

struct NGrid {
  long start = 10;
  long step = 10;
  long max = 2000;
};

// Evaluates the power grid; recommended_n is absent when the target is not
// reached by grid.max (the curve is still returned).
PowerCurve required_n(const DesignInputs& inputs, const NGrid& grid);

struct DesignDiagnostics {
  double s0_at_tau = 0.0;
  double g_at_tau = 0.0;
  double e2 = 0.0;
  double sigma_tilde = 0.0;
  double v_at_recommended = 0.0;  // NaN when no recommendation
  std::size_t n_subjects = 0;
  std::size_t n_events = 0;
  std::vector<std::string> warnings;
};

struct DesignReport {
  PowerCurve curve;
  DesignDiagnostics diagnostics;
  DesignInputs inputs;
};

// Sizing from reference data: S0 and G by (reversed) Kaplan-Meier, hazard by
// Nelson-Aalen, e2 from the reference covariates when requested. The arm
// column, if any, is ignored (the reference stands in for the control group).
DesignReport design_stage(const SurvivalDataset& reference, double tau, double alpha,
                          double target_power, double theta_alt, double pi,
                          const std::vector<std::string>& covariates,
                          const NGrid& grid, TauPolicy policy = TauPolicy::Error);

// Blinded mid-trial recalculation: identical computation on the pooled data.
// Never reads the arm column; records a warning when one is present.
DesignReport midtrial_recalc(const SurvivalDataset& blinded, double tau, double alpha,
                             double target_power, double theta_alt, double pi,
                             const std::vector<std::string>& covariates,
                             const NGrid& grid, TauPolicy policy = TauPolicy::Error);

}  // namespace rmst
