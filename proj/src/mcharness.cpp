#include "rmstdesign/mcharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rmstdesign/augmentation.hpp"
#include "rmstdesign/design.hpp"
#include "rmstdesign/errors.hpp"
#include "rmstdesign/estimators.hpp"
#include "rmstdesign/stats.hpp"

namespace rmst {

namespace {

constexpr double kAlpha = 0.05;
constexpr double kPi = 0.5;

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

// mean over non-NaN entries (deterministic order)
double mean_skipping_nan(const std::vector<double>& xs) {
  std::vector<double> keep;
  keep.reserve(xs.size());
  for (double x : xs) {
    if (!std::isnan(x)) keep.push_back(x);
  }
  if (keep.empty()) return nan_value();
  return pairwise_sum(keep) / static_cast<double>(keep.size());
}

double binomial_se(double p, std::size_t n) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

}  // namespace

TestMethod parse_method(const std::string& name) {
  if (name == "unadjusted") return TestMethod::Unadjusted;
  if (name == "augmented") return TestMethod::Augmented;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_name(TestMethod m) {
  return m == TestMethod::Unadjusted ? "unadjusted" : "augmented";
}

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  // exceptions are kept per index so the one that surfaces does not depend on
  // thread scheduling: the lowest failing index wins
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double default_sizing_difference(Scenario s) {
  return scenario_is_null(s) ? true_rmst_diff(Scenario::SData2a) : true_rmst_diff(s);
}

Table1Row table1_run(Scenario scenario, std::size_t n, std::size_t reps,
                     std::size_t reference_reps, std::uint64_t seed, unsigned workers) {
  if (reps < 100) throw std::invalid_argument("table1_run: need at least 100 replications");
  const double tau = scenario_tau();
  const double theta_alt = true_rmst_diff(scenario);
  const std::vector<std::string> covariates = {"V1", "V2"};

  ScenarioSpec spec;
  spec.scenario = scenario;
  spec.n = n;
  spec.seed = seed;

  // empirical rejection rates
  std::vector<double> rej_un(reps, 0.0), rej_aug(reps, 0.0);
  parallel_for(reps, workers, [&](std::size_t r) {
    const SurvivalDataset data = generate_target(spec, r, n);
    const AugmentedFit fit = augmented_fit(data, tau, kPi);
    const double z = normal_quantile(1.0 - kAlpha / 2.0);
    rej_un[r] = std::fabs(fit.base.theta_diff) > z * fit.base.std_error() ? 1.0 : 0.0;
    rej_aug[r] = std::fabs(fit.theta_aug) > z * fit.std_error() ? 1.0 : 0.0;
  });

  Table1Row row;
  row.scenario = scenario;
  row.n = n;
  row.reps = reps;
  row.reference_reps = reference_reps;
  row.theta_alt = theta_alt;
  row.power_unadjusted = pairwise_sum(rej_un) / static_cast<double>(reps);
  row.power_augmented = pairwise_sum(rej_aug) / static_cast<double>(reps);
  row.se_unadjusted = binomial_se(row.power_unadjusted, reps);
  row.se_augmented = binomial_se(row.power_augmented, reps);

  if (scenario_is_null(scenario) || reference_reps == 0) {
    row.cpp_unadjusted = row.cpp_augmented = nan_value();
    row.mpp_unadjusted = row.mpp_augmented = nan_value();
    return row;
  }

  // mean predicted power over reference draws
  std::vector<double> cpp_un(reference_reps), cpp_aug(reference_reps);
  std::vector<double> mpp_un(reference_reps), mpp_aug(reference_reps);
  std::atomic<std::size_t> failures{0};
  auto predicted_pair = [&](const SurvivalDataset& ref, double& un, double& aug) {
    const std::vector<double> times = ref.times();
    const std::vector<int> events = ref.events();
    const StepFunction s0 = kaplan_meier(times, events);
    const StepFunction g = censoring_km(times, events);
    const StepFunction lam = nelson_aalen(times, events);
    const DesignInputs base =
        make_design_inputs(s0, g, lam, tau, kAlpha, 0.8, theta_alt, kPi, 0.0);
    un = predicted_power(base, static_cast<long>(n));
    const double e2 = e2_hat(ref, tau, kPi).value;
    const DesignInputs with_e2 =
        make_design_inputs(s0, g, lam, tau, kAlpha, 0.8, theta_alt, kPi, e2);
    aug = predicted_power(with_e2, static_cast<long>(n));
  };
  parallel_for(reference_reps, workers, [&](std::size_t r) {
    ScenarioSpec ref_spec = spec;
    try {
      ref_spec.reference_kind = ReferenceKind::CorrectlyMatched;
      predicted_pair(generate_reference(ref_spec, r), cpp_un[r], cpp_aug[r]);
    } catch (const Error&) {
      cpp_un[r] = cpp_aug[r] = nan_value();
      failures.fetch_add(1);
    }
    try {
      ref_spec.reference_kind = ReferenceKind::MisMatched;
      predicted_pair(generate_reference(ref_spec, r), mpp_un[r], mpp_aug[r]);
    } catch (const Error&) {
      mpp_un[r] = mpp_aug[r] = nan_value();
      failures.fetch_add(1);
    }
  });
  row.cpp_unadjusted = mean_skipping_nan(cpp_un);
  row.cpp_augmented = mean_skipping_nan(cpp_aug);
  row.mpp_unadjusted = mean_skipping_nan(mpp_un);
  row.mpp_augmented = mean_skipping_nan(mpp_aug);
  row.reference_failures = failures.load();
  return row;
}

Table2Row table2_run(Scenario scenario, TestMethod method, std::size_t n_mid,
                     double target_power, std::size_t reps, std::uint64_t seed,
                     unsigned workers, long n_cap, double theta_alt) {
  if (n_mid < 2) throw std::invalid_argument("table2_run: n_mid too small");
  if (static_cast<long>(n_mid) >= n_cap) {
    throw std::invalid_argument("table2_run: n_mid must be below the grid cap");
  }
  if (theta_alt < 0.0) theta_alt = default_sizing_difference(scenario);
  const double tau = scenario_tau();
  const std::vector<std::string> covariates =
      method == TestMethod::Augmented ? std::vector<std::string>{"V1", "V2"}
                                      : std::vector<std::string>{};

  ScenarioSpec spec;
  spec.scenario = scenario;
  spec.seed = seed;

  NGrid grid;
  grid.start = std::max<long>(static_cast<long>(n_mid), 10);
  grid.step = 10;
  grid.max = n_cap;

  std::vector<double> selected(reps, nan_value());
  std::vector<double> rejected(reps, nan_value());
  std::vector<unsigned char> capped(reps, 0);
  parallel_for(reps, workers, [&](std::size_t r) {
    try {
      SurvivalDataset blinded = generate_target(spec, r, n_mid);
      blinded.has_arm = false;  // mid-trial look never sees assignments
      const DesignReport report = midtrial_recalc(blinded, tau, kAlpha, target_power,
                                                  theta_alt, kPi, covariates, grid);
      long n_sel = n_cap;
      if (report.curve.recommended_n) {
        n_sel = *report.curve.recommended_n;
      } else {
        capped[r] = 1;
      }
      const SurvivalDataset full = generate_target(spec, r, static_cast<std::size_t>(n_sel));
      const double z = normal_quantile(1.0 - kAlpha / 2.0);
      bool reject;
      if (method == TestMethod::Augmented) {
        const AugmentedFit fit = augmented_fit(full, tau, kPi);
        reject = std::fabs(fit.theta_aug) > z * fit.std_error();
      } else {
        const RmstFit fit = rmst_fit(full, tau);
        reject = std::fabs(fit.theta_diff) > z * fit.std_error();
      }
      selected[r] = static_cast<double>(n_sel);
      rejected[r] = reject ? 1.0 : 0.0;
    } catch (const Error&) {
      // curves failed to reach tau in this replication; counted, not fatal
    }
  });

  Table2Row row;
  row.scenario = scenario;
  row.method = method;
  row.n_mid = n_mid;
  row.reps = reps;
  row.theta_alt = theta_alt;
  row.target_power = target_power;
  row.n_cap = n_cap;

  std::vector<double> ns, rj;
  ns.reserve(reps);
  rj.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    if (std::isnan(selected[r])) {
      ++row.support_failures;
      continue;
    }
    ns.push_back(selected[r]);
    rj.push_back(rejected[r]);
    row.cap_hits += capped[r];
  }
  if (ns.empty()) throw Error("table2_run: every replication failed");
  row.power = pairwise_sum(rj) / static_cast<double>(rj.size());
  row.se_power = binomial_se(row.power, rj.size());
  row.n_min = static_cast<long>(*std::min_element(ns.begin(), ns.end()));
  row.n_max = static_cast<long>(*std::max_element(ns.begin(), ns.end()));
  row.n_q1 = static_cast<long>(quantile_lower(ns, 0.25));
  row.n_median = static_cast<long>(quantile_lower(ns, 0.5));
  row.n_q3 = static_cast<long>(quantile_lower(ns, 0.75));
  return row;
}

}  // namespace rmst
