#include "rmstdesign/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rmst {

StepFunction::StepFunction(double initial, std::vector<double> jump_times,
                           std::vector<double> values, double support_end)
    : initial_(initial),
      times_(std::move(jump_times)),
      values_(std::move(values)),
      support_end_(support_end) {
  if (times_.size() != values_.size()) {
    throw std::invalid_argument("StepFunction: jump_times/values size mismatch");
  }
  double prev = 0.0;
  for (double t : times_) {
    if (!(t > prev) || !std::isfinite(t)) {
      throw std::invalid_argument(
          "StepFunction: jump times must be strictly increasing and positive");
    }
    prev = t;
  }
}

StepFunction StepFunction::constant(double value) {
  return StepFunction(value, {}, {});
}

double StepFunction::operator()(double t) const {
  // index of first jump time > t; value on [times[k-1], times[k]) is values[k-1]
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double StepFunction::left_limit(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

CumulativeAreas::CumulativeAreas(const StepFunction& f)
    : initial_(f.initial_value()), times_(f.jump_times()), values_(f.values()) {
  cum_.reserve(times_.size());
  double area = 0.0;
  double cur = 0.0;
  double value = initial_;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    area += value * (times_[k] - cur);
    cur = times_[k];
    value = values_[k];
    cum_.push_back(area);
  }
}

double CumulativeAreas::up_to(double x) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), x);
  if (it == times_.begin()) return initial_ * x;
  const std::size_t k = static_cast<std::size_t>(it - times_.begin()) - 1;
  return cum_[k] + values_[k] * (x - times_[k]);
}

}  // namespace rmst
