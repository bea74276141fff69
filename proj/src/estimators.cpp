#include "rmstdesign/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmstdesign/errors.hpp"

namespace rmst {

namespace {

// Distinct observed times with event counts and risk-set sizes.
struct DistinctTable {
  std::vector<double> time;
  std::vector<int> n_events;
  std::vector<int> at_risk;
  double max_time = 0.0;
};

DistinctTable tabulate(const std::vector<double>& times, const std::vector<int>& events) {
  const std::size_t n = times.size();
  if (n == 0) throw EmptyInputError("no observations");
  if (events.size() != n) throw std::invalid_argument("times/events length mismatch");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  DistinctTable tab;
  std::size_t i = 0;
  while (i < n) {
    const double t = times[order[i]];
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw NonPositiveTimeError("observed times must be positive finite reals");
    }
    int d = 0;
    std::size_t j = i;
    while (j < n && times[order[j]] == t) {
      const int e = events[order[j]];
      if (e != 0 && e != 1) throw InvalidIndicatorError("event indicator outside {0,1}");
      d += e;
      ++j;
    }
    tab.time.push_back(t);
    tab.n_events.push_back(d);
    tab.at_risk.push_back(static_cast<int>(n - i));
    i = j;
  }
  tab.max_time = tab.time.back();
  return tab;
}

StepFunction km_from_table(const DistinctTable& tab) {
  std::vector<double> jump_times, values;
  double s = 1.0;
  for (std::size_t k = 0; k < tab.time.size(); ++k) {
    if (tab.n_events[k] == 0) continue;
    s *= 1.0 - static_cast<double>(tab.n_events[k]) / tab.at_risk[k];
    jump_times.push_back(tab.time[k]);
    values.push_back(s);
  }
  return StepFunction(1.0, std::move(jump_times), std::move(values), tab.max_time);
}

// Exact prefix area int_0^x s(u) du via left-to-right knot sums.
double prefix_area(const StepFunction& s, double x) {
  double area = 0.0;
  double cur = 0.0;
  double value = s.initial_value();
  const auto& times = s.jump_times();
  const auto& values = s.values();
  for (std::size_t k = 0; k < times.size() && times[k] < x; ++k) {
    area += value * (times[k] - cur);
    cur = times[k];
    value = values[k];
  }
  area += value * (x - cur);
  return area;
}

void check_support(const StepFunction& s, double tau, TauPolicy policy) {
  if (policy == TauPolicy::Extend) return;
  if (tau > s.support_end() && s(s.support_end()) > 0.0) {
    throw TauBeyondSupportError(
        "tau exceeds the last observed time while the curve is still positive "
        "(use the extend policy to carry the last value forward)");
  }
}

// Quantities for one arm/sample needed by the variance and influence sums.
struct SampleCurves {
  DistinctTable tab;
  StepFunction survival = StepFunction::constant(1.0);
  double theta = 0.0;                  // int_0^tau S
  std::vector<std::size_t> event_idx;  // indices into tab with d>0 and t<=tau
  std::vector<double> tail_area;       // A(t_k) at those times
};

SampleCurves sample_curves(const std::vector<double>& times, const std::vector<int>& events,
                           double tau, TauPolicy policy) {
  SampleCurves sc;
  sc.tab = tabulate(times, events);
  sc.survival = km_from_table(sc.tab);
  check_support(sc.survival, tau, policy);
  const CumulativeAreas areas(sc.survival);
  const double total = areas.up_to(tau);
  sc.theta = total;
  for (std::size_t k = 0; k < sc.tab.time.size(); ++k) {
    if (sc.tab.n_events[k] == 0 || sc.tab.time[k] > tau) continue;
    sc.event_idx.push_back(k);
    sc.tail_area.push_back(total - areas.up_to(sc.tab.time[k]));
  }
  return sc;
}

// h_i = int [A/Ybar] dMhat_i with Ybar = Y/n_ref; +1 sign convention.
std::vector<double> sample_integrals(const SampleCurves& sc,
                                     const std::vector<double>& times,
                                     const std::vector<int>& events, double tau,
                                     double n_ref) {
  const std::size_t m = sc.event_idx.size();
  // f_k = A_k * n_ref / Y_k at the k-th event knot; cumulative drift
  // C_k = sum_{j<=k} f_j d_j / Y_j
  std::vector<double> knot_time(m), f(m), cum(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t idx = sc.event_idx[k];
    knot_time[k] = sc.tab.time[idx];
    f[k] = sc.tail_area[k] * n_ref / sc.tab.at_risk[idx];
    running += f[k] * sc.tab.n_events[idx] / sc.tab.at_risk[idx];
    cum[k] = running;
  }

  std::vector<double> h(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double horizon = std::min(times[i], tau);
    // last event knot <= horizon
    auto it = std::upper_bound(knot_time.begin(), knot_time.end(), horizon);
    double v = 0.0;
    if (it != knot_time.begin()) {
      v -= cum[static_cast<std::size_t>(it - knot_time.begin()) - 1];
    }
    if (events[i] == 1 && times[i] <= tau) {
      // own jump: times[i] is an event knot
      auto jt = std::lower_bound(knot_time.begin(), knot_time.end(), times[i]);
      if (jt != knot_time.end() && *jt == times[i]) {
        v += f[static_cast<std::size_t>(jt - knot_time.begin())];
      }
    }
    h[i] = v;
  }
  return h;
}

}  // namespace

StepFunction kaplan_meier(const std::vector<double>& times, const std::vector<int>& events) {
  return km_from_table(tabulate(times, events));
}

StepFunction nelson_aalen(const std::vector<double>& times, const std::vector<int>& events) {
  const DistinctTable tab = tabulate(times, events);
  std::vector<double> jump_times, values;
  double h = 0.0;
  for (std::size_t k = 0; k < tab.time.size(); ++k) {
    if (tab.n_events[k] == 0) continue;
    h += static_cast<double>(tab.n_events[k]) / tab.at_risk[k];
    jump_times.push_back(tab.time[k]);
    values.push_back(h);
  }
  return StepFunction(0.0, std::move(jump_times), std::move(values), tab.max_time);
}

StepFunction censoring_km(const std::vector<double>& times, const std::vector<int>& events) {
  std::vector<int> flipped(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i] != 0 && events[i] != 1) {
      throw InvalidIndicatorError("event indicator outside {0,1}");
    }
    flipped[i] = 1 - events[i];
  }
  return kaplan_meier(times, flipped);
}

double rmst_integral(const StepFunction& s, double tau, TauPolicy policy) {
  if (!(tau > 0.0)) throw std::invalid_argument("rmst_integral: tau must be positive");
  check_support(s, tau, policy);
  return prefix_area(s, tau);
}

double rmst_tail_integral(const StepFunction& s, double t, double tau, TauPolicy policy) {
  if (!(tau > 0.0)) throw std::invalid_argument("rmst_tail_integral: tau must be positive");
  if (!(t >= 0.0) || t > tau) {
    throw std::invalid_argument("rmst_tail_integral: need 0 <= t <= tau");
  }
  check_support(s, tau, policy);
  return prefix_area(s, tau) - prefix_area(s, t);
}

double RmstFit::std_error(bool influence_form) const {
  return std::sqrt((influence_form ? var_influence : var_plugin) / static_cast<double>(n));
}

RmstFit rmst_fit(const SurvivalDataset& d, double tau, TauPolicy policy) {
  if (!d.has_arm) throw ArmAbsentError("rmst_fit: dataset has no arm column");
  if (!(tau > 0.0)) throw std::invalid_argument("rmst_fit: tau must be positive");

  const std::size_t n = d.size();
  std::vector<double> t0, t1;
  std::vector<int> e0, e1;
  std::vector<std::size_t> idx0, idx1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = d.subjects[i];
    if (s.arm == 1) {
      t1.push_back(s.time);
      e1.push_back(s.event);
      idx1.push_back(i);
    } else {
      t0.push_back(s.time);
      e0.push_back(s.event);
      idx0.push_back(i);
    }
  }
  if (t0.empty()) throw EmptyArmError("rmst_fit: control arm is empty");
  if (t1.empty()) throw EmptyArmError("rmst_fit: treatment arm is empty");

  const SampleCurves a0 = sample_curves(t0, e0, tau, policy);
  const SampleCurves a1 = sample_curves(t1, e1, tau, policy);

  RmstFit fit;
  fit.tau = tau;
  fit.n = n;
  fit.n_control = t0.size();
  fit.n_treatment = t1.size();
  fit.theta_control = a0.theta;
  fit.theta_treatment = a1.theta;
  fit.theta_diff = a1.theta - a0.theta;

  // sigma1^2 = n * sum_z sum_k A_k^2 d_k / Y_k^2
  double plugin = 0.0;
  for (const SampleCurves* sc : {&a0, &a1}) {
    for (std::size_t k = 0; k < sc->event_idx.size(); ++k) {
      const std::size_t idx = sc->event_idx[k];
      const double y = sc->tab.at_risk[idx];
      plugin += sc->tail_area[k] * sc->tail_area[k] * sc->tab.n_events[idx] / (y * y);
    }
  }
  fit.var_plugin = plugin * static_cast<double>(n);

  const double n_ref = static_cast<double>(n);
  const std::vector<double> h0 = sample_integrals(a0, t0, e0, tau, n_ref);
  const std::vector<double> h1 = sample_integrals(a1, t1, e1, tau, n_ref);

  fit.influence.assign(n, 0.0);
  for (std::size_t j = 0; j < idx0.size(); ++j) fit.influence[idx0[j]] = h0[j];
  for (std::size_t j = 0; j < idx1.size(); ++j) fit.influence[idx1[j]] = -h1[j];

  double ss = 0.0;
  for (double h : fit.influence) ss += h * h;
  fit.var_influence = ss / static_cast<double>(n);
  return fit;
}

std::vector<double> martingale_integrals(const std::vector<double>& times,
                                         const std::vector<int>& events, double tau,
                                         double n_ref, TauPolicy policy) {
  if (!(tau > 0.0)) throw std::invalid_argument("martingale_integrals: tau must be positive");
  const SampleCurves sc = sample_curves(times, events, tau, policy);
  return sample_integrals(sc, times, events, tau, n_ref);
}

}  // namespace rmst
