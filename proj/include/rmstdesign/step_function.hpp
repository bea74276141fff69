#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace rmst {

// Right-continuous piecewise-constant function on [0, inf):
//   value = initial            on [0, times[0])
//   value = values[k]          on [times[k], times[k+1])
//   value = values.back()      on [times.back(), inf)
// Carrier for survival curves, censoring curves and cumulative hazards.
//
// support_end marks the largest observed time behind an estimated curve;
// evaluation past it is still defined (last value carried forward) but
// integration policies may refuse to use it. Analytic curves leave it at
// infinity.
class StepFunction {
 public:
  StepFunction(double initial, std::vector<double> jump_times,
               std::vector<double> values,
               double support_end = std::numeric_limits<double>::infinity());

  static StepFunction constant(double value);

  // Right-continuous evaluation at t >= 0.
  double operator()(double t) const;

  // Left limit f(t-). At t <= first jump this is the initial value.
  double left_limit(double t) const;

  double initial_value() const { return initial_; }
  const std::vector<double>& jump_times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  double support_end() const { return support_end_; }
  std::size_t size() const { return times_.size(); }

  // Value on the interval ending at times_[k] (initial for k == 0).
  double value_before(std::size_t k) const {
    return k == 0 ? initial_ : values_[k - 1];
  }

 private:
  double initial_;
  std::vector<double> times_;
  std::vector<double> values_;
  double support_end_;
};

// Exact prefix areas int_0^x f(u) du of a step function, precomputed once so
// repeated queries cost O(log K). up_to is bit-identical to accumulating the
// width x height terms left to right.
class CumulativeAreas {
 public:
  explicit CumulativeAreas(const StepFunction& f);
  double up_to(double x) const;

 private:
  double initial_;
  std::vector<double> times_;
  std::vector<double> values_;
  std::vector<double> cum_;  // cum_[k] = area up to times_[k]
};

}  // namespace rmst
