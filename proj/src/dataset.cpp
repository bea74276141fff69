#include "rmstdesign/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmstdesign/errors.hpp"

namespace rmst {

std::vector<double> SurvivalDataset::times() const {
  std::vector<double> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) out.push_back(s.time);
  return out;
}

std::vector<int> SurvivalDataset::events() const {
  std::vector<int> out;
  out.reserve(subjects.size());
  for (const auto& s : subjects) out.push_back(s.event);
  return out;
}

std::size_t SurvivalDataset::covariate_index(const std::string& name) const {
  auto it = std::find(covariate_names.begin(), covariate_names.end(), name);
  if (it == covariate_names.end()) {
    throw MissingColumnError("covariate not in dataset: " + name);
  }
  return static_cast<std::size_t>(it - covariate_names.begin());
}

void SurvivalDataset::validate() const {
  if (subjects.empty()) throw EmptyDatasetError("dataset has no subjects");
  const std::size_t p = covariate_names.size();
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const auto& s = subjects[i];
    const std::string where = "subject " + std::to_string(i + 1);
    if (!(s.time > 0.0) || !std::isfinite(s.time)) {
      throw NonPositiveTimeError(where + ": time must be a positive finite real");
    }
    if (s.event != 0 && s.event != 1) {
      throw InvalidIndicatorError(where + ": event must be 0 or 1");
    }
    if (has_arm && s.arm != 0 && s.arm != 1) {
      throw InvalidIndicatorError(where + ": arm must be 0 or 1");
    }
    if (s.covariates.size() != p) {
      throw InvalidIndicatorError(where + ": covariate arity mismatch");
    }
    for (double v : s.covariates) {
      if (!std::isfinite(v)) {
        throw NonNumericValueError(where + ": covariate value not finite");
      }
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_missing(const std::string& cell) {
  if (cell.empty()) return true;
  std::string low;
  for (char c : cell) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return low == "na" || low == "nan" || low == "null";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_real(const std::string& cell, std::size_t row, const std::string& col) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw NonNumericValueError("row " + std::to_string(row) + ", column '" + col +
                               "': cannot parse '" + cell + "' as a number");
  }
  return value;
}

int parse_indicator(const std::string& cell, std::size_t row, const std::string& col) {
  const double v = parse_real(cell, row, col);
  if (v == 0.0) return 0;
  if (v == 1.0) return 1;
  throw InvalidIndicatorError("row " + std::to_string(row) + ", column '" + col +
                              "': value '" + cell + "' outside {0,1}");
}

}  // namespace

LoadResult load_csv(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyDatasetError(path + ": empty file");
  const std::vector<std::string> header = split_line(line);

  auto column_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw MissingColumnError(path + ": missing required column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t time_col = column_of("time");
  const std::size_t event_col = column_of("event");
  std::optional<std::size_t> arm_col;
  if (options.arm_column) arm_col = column_of(*options.arm_column);
  std::vector<std::size_t> cov_cols;
  cov_cols.reserve(options.covariate_columns.size());
  for (const auto& name : options.covariate_columns) cov_cols.push_back(column_of(name));

  LoadResult result;
  result.data.has_arm = arm_col.has_value();
  result.data.covariate_names = options.covariate_columns;

  std::size_t row = 1;  // data rows are 1-based in messages
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw NonNumericValueError(path + ": row " + std::to_string(row) + " has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(header.size()));
    }

    bool missing = is_missing(cells[time_col]) || is_missing(cells[event_col]);
    if (arm_col) missing = missing || is_missing(cells[*arm_col]);
    for (std::size_t c : cov_cols) missing = missing || is_missing(cells[c]);
    if (missing) {
      if (options.missing == MissingPolicy::Drop) {
        ++result.dropped_rows;
        ++row;
        continue;
      }
      throw NonNumericValueError(path + ": row " + std::to_string(row) +
                                 " has a missing value in a requested column");
    }

    SubjectRecord rec;
    rec.time = parse_real(cells[time_col], row, "time");
    if (!(rec.time > 0.0) || !std::isfinite(rec.time)) {
      throw NonPositiveTimeError(path + ": row " + std::to_string(row) +
                                 ": time must be positive, got '" + cells[time_col] + "'");
    }
    rec.event = parse_indicator(cells[event_col], row, "event");
    if (arm_col) rec.arm = parse_indicator(cells[*arm_col], row, *options.arm_column);
    rec.covariates.reserve(cov_cols.size());
    for (std::size_t k = 0; k < cov_cols.size(); ++k) {
      rec.covariates.push_back(
          parse_real(cells[cov_cols[k]], row, options.covariate_columns[k]));
    }
    result.data.subjects.push_back(std::move(rec));
    ++row;
  }

  if (result.data.subjects.empty()) {
    throw EmptyDatasetError(path + ": no data rows");
  }
  result.data.validate();
  return result;
}

void write_csv(const SurvivalDataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path);

  out << "time,event";
  if (d.has_arm) out << ",arm";
  for (const auto& name : d.covariate_names) out << ',' << name;
  out << '\n';

  char buf[40];
  auto put_real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const auto& s : d.subjects) {
    put_real(s.time);
    out << ',' << s.event;
    if (d.has_arm) out << ',' << s.arm;
    for (double v : s.covariates) {
      out << ',';
      put_real(v);
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

std::pair<SurvivalDataset, SurvivalDataset> split_by_arm(const SurvivalDataset& d) {
  if (!d.has_arm) throw ArmAbsentError("split_by_arm: dataset has no arm column");
  SurvivalDataset control, treatment;
  control.covariate_names = d.covariate_names;
  treatment.covariate_names = d.covariate_names;
  for (const auto& s : d.subjects) {
    (s.arm == 1 ? treatment : control).subjects.push_back(s);
  }
  return {std::move(control), std::move(treatment)};
}

SurvivalDataset select_covariates(const SurvivalDataset& d,
                                  const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(d.covariate_index(n));

  SurvivalDataset out;
  out.has_arm = d.has_arm;
  out.covariate_names = names;
  out.subjects.reserve(d.subjects.size());
  for (const auto& s : d.subjects) {
    SubjectRecord rec;
    rec.time = s.time;
    rec.event = s.event;
    rec.arm = s.arm;
    rec.covariates.reserve(idx.size());
    for (std::size_t k : idx) rec.covariates.push_back(s.covariates[k]);
    out.subjects.push_back(std::move(rec));
  }
  return out;
}

}  // namespace rmst
