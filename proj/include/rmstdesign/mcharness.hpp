#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "rmstdesign/simulation.hpp"

namespace rmst {

enum class TestMethod { Unadjusted, Augmented };

TestMethod parse_method(const std::string& name);
std::string method_name(TestMethod m);

// Replication-parallel loop with a bounded worker pool. Work items write to
// preallocated slots, so results do not depend on scheduling.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn);

unsigned default_workers();

// Effect size the adaptive sizing targets: the scenario's own difference, or
// for the null scenarios the PH-alternative difference (so the procedure is
// exercised even though the truth is 0).
double default_sizing_difference(Scenario s);

struct Table1Row {
  Scenario scenario = Scenario::SData2a;
  std::size_t n = 0, reps = 0, reference_reps = 0;
  double theta_alt = 0.0;  // effect behind the predicted powers (0 under null)
  double power_unadjusted = 0.0, power_augmented = 0.0;
  double se_unadjusted = 0.0, se_augmented = 0.0;  // MC standard errors
  // mean predicted powers over reference draws; NaN for null scenarios
  double cpp_unadjusted = 0.0, cpp_augmented = 0.0;
  double mpp_unadjusted = 0.0, mpp_augmented = 0.0;
  std::size_t reference_failures = 0;  // reference draws whose curves missed tau
};

// Empirical size/power of both tests plus average predicted power under
// correctly-matched and mis-matched reference draws.
Table1Row table1_run(Scenario scenario, std::size_t n, std::size_t reps,
                     std::size_t reference_reps, std::uint64_t seed,
                     unsigned workers = default_workers());

struct Table2Row {
  Scenario scenario = Scenario::SData2a;
  TestMethod method = TestMethod::Unadjusted;
  std::size_t n_mid = 0, reps = 0;
  double theta_alt = 0.0, target_power = 0.8;
  double power = 0.0, se_power = 0.0;
  long n_min = 0, n_q1 = 0, n_median = 0, n_q3 = 0, n_max = 0;
  long n_cap = 0;
  std::size_t cap_hits = 0;          // replications that ran at the grid cap
  std::size_t support_failures = 0;  // replications skipped (curves missed tau)
};

// Blinded adaptive loop: recalculate n from the first n_mid subjects, extend
// the trial to the selected size, run the final test.
Table2Row table2_run(Scenario scenario, TestMethod method, std::size_t n_mid,
                     double target_power, std::size_t reps, std::uint64_t seed,
                     unsigned workers = default_workers(), long n_cap = 2000,
                     double theta_alt = -1.0 /* <0: default_sizing_difference */);

}  // namespace rmst
