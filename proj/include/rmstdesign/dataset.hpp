#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rmst {

// One row of a trial or reference dataset: observed time X = min(T, C),
// event indicator, optional treatment arm, pre-encoded numeric covariates.
struct SubjectRecord {
  double time = 0.0;
  int event = 0;  // 1 = failure observed, 0 = censored
  int arm = 0;    // meaningful only when the dataset has arms
  std::vector<double> covariates;
};

struct SurvivalDataset {
  std::vector<SubjectRecord> subjects;
  std::vector<std::string> covariate_names;
  bool has_arm = false;

  std::size_t size() const { return subjects.size(); }
  std::size_t covariate_arity() const { return covariate_names.size(); }

  std::vector<double> times() const;
  std::vector<int> events() const;

  // Index of a covariate by name; throws MissingColumnError if absent.
  std::size_t covariate_index(const std::string& name) const;

  // Checks the structural invariants (positive finite times, 0/1 indicators,
  // covariate arity). Throws the matching datamodel error.
  void validate() const;
};

enum class MissingPolicy { Reject, Drop };

struct LoadOptions {
  std::optional<std::string> arm_column;
  std::vector<std::string> covariate_columns;
  MissingPolicy missing = MissingPolicy::Reject;
};

struct LoadResult {
  SurvivalDataset data;
  std::size_t dropped_rows = 0;
};

// Reads a header-ed CSV with mandatory `time` and `event` columns.
// Rows with missing values (empty, NA, NaN) in any requested column are
// rejected (error naming the row) or dropped per options.missing.
LoadResult load_csv(const std::string& path, const LoadOptions& options = {});

// Writes the standard CSV schema: time,event[,arm][,covariates...].
// Reals are rendered with 17 significant digits so load(write(d)) == d.
void write_csv(const SurvivalDataset& d, const std::string& path);

// (control Z=0, treatment Z=1)
std::pair<SurvivalDataset, SurvivalDataset> split_by_arm(const SurvivalDataset& d);

// Dataset restricted to the named covariate columns (order as given).
SurvivalDataset select_covariates(const SurvivalDataset& d,
                                  const std::vector<std::string>& names);

}  // namespace rmst
