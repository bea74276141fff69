#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "rmstdesign/dataset.hpp"
#include "rmstdesign/step_function.hpp"

namespace testutil {

// Dense step-curve approximation of a smooth function on [0, t_max]
// (left-endpoint values; support unbounded so analytic curves pass the
// tau checks).
inline rmst::StepFunction make_step_curve(const std::function<double(double)>& f,
                                          double t_max, std::size_t knots) {
  std::vector<double> times, values;
  times.reserve(knots);
  values.reserve(knots);
  for (std::size_t k = 1; k <= knots; ++k) {
    const double t = t_max * static_cast<double>(k) / static_cast<double>(knots);
    times.push_back(t);
    values.push_back(f(t));
  }
  return rmst::StepFunction(f(0.0), std::move(times), std::move(values));
}

inline rmst::StepFunction exponential_curve(double rate, double t_max,
                                            std::size_t knots = 100000) {
  return make_step_curve([rate](double t) { return std::exp(-rate * t); }, t_max, knots);
}

inline rmst::SurvivalDataset two_arm_dataset(const std::vector<double>& times,
                                             const std::vector<int>& events,
                                             const std::vector<int>& arms) {
  rmst::SurvivalDataset d;
  d.has_arm = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    d.subjects.push_back({times[i], events[i], arms[i], {}});
  }
  return d;
}

inline rmst::SurvivalDataset single_arm_dataset(const std::vector<double>& times,
                                                const std::vector<int>& events) {
  rmst::SurvivalDataset d;
  for (std::size_t i = 0; i < times.size(); ++i) {
    d.subjects.push_back({times[i], events[i], 0, {}});
  }
  return d;
}

// Scratch file removed at scope exit.
class TempFile {
 public:
  explicit TempFile(const std::string& name)
      : path_((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path_.c_str()); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace testutil
