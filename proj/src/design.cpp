#include "rmstdesign/design.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmstdesign/errors.hpp"
#include "rmstdesign/stats.hpp"

namespace rmst {

namespace {

void check_survival_shape(const StepFunction& s, const char* what) {
  if (std::fabs(s.initial_value() - 1.0) > 1e-12) {
    throw NonSurvivalInputError(std::string(what) + ": survival curve must start at 1");
  }
  double prev = s.initial_value();
  for (double v : s.values()) {
    if (v > prev + 1e-12 || v < -1e-12) {
      throw NonSurvivalInputError(std::string(what) +
                                  ": survival curve must be non-increasing in [0,1]");
    }
    prev = v;
  }
}

void check_hazard_shape(const StepFunction& s) {
  if (std::fabs(s.initial_value()) > 1e-12) {
    throw NonSurvivalInputError("cumulative hazard must start at 0");
  }
  double prev = s.initial_value();
  for (double v : s.values()) {
    if (v < prev - 1e-12) {
      throw NonSurvivalInputError("cumulative hazard must be non-decreasing");
    }
    prev = v;
  }
}

void check_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::invalid_argument("allocation probability pi must lie in (0,1)");
  }
}

// Shared knot-sum: increments (t_k, dLambda_k) supplied by the caller.
double sigma_tilde_core(const StepFunction& s0, const StepFunction& g, double tau,
                        double pi, const std::vector<double>& knot_times,
                        const std::vector<double>& increments) {
  if (tau > s0.support_end() && s0(s0.support_end()) > 0.0) {
    throw DivergentIntegrandError(
        "control survival support ends before tau; cannot evaluate the variance integral");
  }
  if (tau > g.support_end() && g(g.support_end()) > 0.0 && g.support_end() < s0.support_end()) {
    throw DivergentIntegrandError("censoring curve support ends before tau");
  }

  const CumulativeAreas areas(s0);
  const double total = areas.up_to(tau);
  double acc = 0.0;
  for (std::size_t k = 0; k < knot_times.size(); ++k) {
    const double t = knot_times[k];
    if (t > tau || increments[k] == 0.0) continue;
    const double tail = total - areas.up_to(t);
    if (tail == 0.0) continue;
    const double denom = s0.left_limit(t) * g.left_limit(t);
    if (!(denom > 0.0)) {
      throw DivergentIntegrandError(
          "S0(t-)G(t-) vanished before tau; the variance integrand diverges");
    }
    acc += tail * tail / denom * increments[k];
  }
  return acc / (pi * (1.0 - pi));
}

}  // namespace

double sigma_tilde_sq(const StepFunction& s0, const StepFunction& g, double tau, double pi) {
  check_pi(pi);
  check_survival_shape(s0, "S0");
  check_survival_shape(g, "G");
  // hazard increments -dS0/S0- from the curve itself
  std::vector<double> times, inc;
  times.reserve(s0.size());
  inc.reserve(s0.size());
  for (std::size_t k = 0; k < s0.size(); ++k) {
    const double before = s0.value_before(k);
    if (before <= 0.0) break;  // mass exhausted; later knots contribute nothing
    times.push_back(s0.jump_times()[k]);
    inc.push_back((before - s0.values()[k]) / before);
  }
  return sigma_tilde_core(s0, g, tau, pi, times, inc);
}

double sigma_tilde_sq(const StepFunction& s0, const StepFunction& lambda0,
                      const StepFunction& g, double tau, double pi) {
  check_pi(pi);
  check_survival_shape(s0, "S0");
  check_survival_shape(g, "G");
  check_hazard_shape(lambda0);
  std::vector<double> times, inc;
  times.reserve(lambda0.size());
  inc.reserve(lambda0.size());
  for (std::size_t k = 0; k < lambda0.size(); ++k) {
    times.push_back(lambda0.jump_times()[k]);
    inc.push_back(lambda0.values()[k] - lambda0.value_before(k));
  }
  return sigma_tilde_core(s0, g, tau, pi, times, inc);
}

DesignInputs make_design_inputs(StepFunction s0, StepFunction g,
                                std::optional<StepFunction> lambda0, double tau,
                                double alpha, double target_power, double theta_alt,
                                double pi, double e2) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(target_power > 0.0 && target_power < 1.0)) {
    throw std::invalid_argument("target power must lie in (0,1)");
  }
  check_pi(pi);
  if (e2 < 0.0) throw std::invalid_argument("e2 must be nonnegative");

  DesignInputs in;
  in.tau = tau;
  in.alpha = alpha;
  in.target_power = target_power;
  in.theta_alt = theta_alt;
  in.pi = pi;
  in.e2 = e2;
  in.sigma_tilde = lambda0 ? sigma_tilde_sq(s0, *lambda0, g, tau, pi)
                           : sigma_tilde_sq(s0, g, tau, pi);
  in.s0 = std::move(s0);
  in.g = std::move(g);
  in.lambda0 = std::move(lambda0);

  if (pi * (1.0 - pi) * e2 >= in.sigma_tilde) {
    throw NegativeVarianceError(
        "pi(1-pi)*e2 >= sigma_tilde^2: augmented variance would not be positive");
  }
  return in;
}

double predicted_power(const DesignInputs& in, long n) {
  if (n < 2) throw std::invalid_argument("predicted_power: n must be at least 2");
  const double v2 = (in.sigma_tilde - in.pi * (1.0 - in.pi) * in.e2) / static_cast<double>(n);
  if (!(v2 > 0.0)) {
    throw NegativeVarianceError("augmented variance nonpositive at the requested n");
  }
  const double v = std::sqrt(v2);
  const double z_lo = normal_quantile(in.alpha / 2.0);
  const double z_hi = normal_quantile(1.0 - in.alpha / 2.0);
  const double shift = in.theta_alt / v;
  return normal_cdf(z_lo - shift) + 1.0 - normal_cdf(z_hi - shift);
}

PowerCurve required_n(const DesignInputs& in, const NGrid& grid) {
  if (grid.step < 1) throw std::invalid_argument("required_n: grid step must be >= 1");
  if (grid.start < 2) throw std::invalid_argument("required_n: grid start must be >= 2");
  if (in.theta_alt == 0.0) {
    throw std::invalid_argument("required_n: sizing is undefined for theta_alt = 0");
  }
  PowerCurve curve;
  for (long n = grid.start; n <= grid.max; n += grid.step) {
    const double p = predicted_power(in, n);
    curve.rows.emplace_back(n, p);
    if (!curve.recommended_n && p >= in.target_power) curve.recommended_n = n;
  }
  return curve;
}

namespace {

DesignReport run_design(const SurvivalDataset& data, double tau, double alpha,
                        double target_power, double theta_alt, double pi,
                        const std::vector<std::string>& covariates, const NGrid& grid,
                        TauPolicy policy, std::vector<std::string> warnings) {
  const std::vector<double> times = data.times();
  const std::vector<int> events = data.events();

  StepFunction s0 = kaplan_meier(times, events);
  StepFunction g = censoring_km(times, events);
  StepFunction lambda0 = nelson_aalen(times, events);
  if (policy == TauPolicy::Extend && tau > s0.support_end() && s0(s0.support_end()) > 0.0) {
    warnings.push_back("curves extended beyond the last observed time to reach tau");
    // widen the recorded support so the variance integral accepts the carry-forward
    s0 = StepFunction(1.0, s0.jump_times(), s0.values());
    g = StepFunction(1.0, g.jump_times(), g.values());
  }

  double e2 = 0.0;
  E2Estimate e2_est;
  if (!covariates.empty()) {
    e2_est = e2_hat(select_covariates(data, covariates), tau, pi, policy);
    e2 = e2_est.value;
    if (e2_est.rank_deficient) {
      warnings.push_back("covariate Gram matrix is ill-conditioned; e2 may be unstable");
    }
  }

  DesignReport report;
  report.inputs = make_design_inputs(std::move(s0), std::move(g), std::move(lambda0), tau,
                                     alpha, target_power, theta_alt, pi, e2);
  report.curve = required_n(report.inputs, grid);

  DesignDiagnostics& diag = report.diagnostics;
  diag.s0_at_tau = report.inputs.s0(tau);
  diag.g_at_tau = report.inputs.g(tau);
  diag.e2 = e2;
  diag.sigma_tilde = report.inputs.sigma_tilde;
  diag.n_subjects = data.size();
  for (int e : events) diag.n_events += static_cast<std::size_t>(e);
  if (report.curve.recommended_n) {
    const double n_rec = static_cast<double>(*report.curve.recommended_n);
    diag.v_at_recommended =
        std::sqrt((report.inputs.sigma_tilde - pi * (1.0 - pi) * e2) / n_rec);
  } else {
    diag.v_at_recommended = std::numeric_limits<double>::quiet_NaN();
  }
  diag.warnings = std::move(warnings);
  return report;
}

}  // namespace

DesignReport design_stage(const SurvivalDataset& reference, double tau, double alpha,
                          double target_power, double theta_alt, double pi,
                          const std::vector<std::string>& covariates, const NGrid& grid,
                          TauPolicy policy) {
  return run_design(reference, tau, alpha, target_power, theta_alt, pi, covariates, grid,
                    policy, {});
}

DesignReport midtrial_recalc(const SurvivalDataset& blinded, double tau, double alpha,
                             double target_power, double theta_alt, double pi,
                             const std::vector<std::string>& covariates, const NGrid& grid,
                             TauPolicy policy) {
  std::vector<std::string> warnings;
  if (blinded.has_arm) {
    warnings.push_back(
        "blinded dataset carries an arm column; it was ignored for the recalculation");
  }
  return run_design(blinded, tau, alpha, target_power, theta_alt, pi, covariates, grid,
                    policy, std::move(warnings));
}

}  // namespace rmst
