// Command-line front end: design / recalc / analyze / select / simulate.
//
// Exit codes: 0 success, 2 target power unreachable on the grid,
// 64 usage errors, 65 data errors.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rmstdesign/augmentation.hpp"
#include "rmstdesign/dataset.hpp"
#include "rmstdesign/design.hpp"
#include "rmstdesign/errors.hpp"
#include "rmstdesign/inference.hpp"
#include "rmstdesign/mcharness.hpp"
#include "rmstdesign/simulation.hpp"
#include "rmstdesign/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTargetUnreachable = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

using json = nlohmann::json;

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw CLI::ValidationError("--format", "expected table, csv or json");
}

std::string joined_args(int argc, char** argv) {
  std::ostringstream os;
  for (int i = 0; i < argc; ++i) {
    if (i) os << ' ';
    os << argv[i];
  }
  return os.str();
}

void print_header(const std::string& command_line) {
  std::printf("# rmstdesign %s\n# command: %s\n", rmst::kVersion, command_line.c_str());
}

rmst::NGrid parse_grid(const std::string& text, long default_start) {
  rmst::NGrid grid;
  grid.start = default_start;
  if (text.empty()) return grid;
  long a = 0, b = 0, c = 0;
  if (std::sscanf(text.c_str(), "%ld:%ld:%ld", &a, &b, &c) != 3 || a < 2 || b < 1 || c < a) {
    throw CLI::ValidationError("--n-grid", "expected start:step:max with start>=2, step>=1");
  }
  grid.start = a;
  grid.step = b;
  grid.max = c;
  return grid;
}

unsigned workers_from(unsigned flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("RMST_DESIGN_WORKERS")) {
    const long w = std::strtol(env, nullptr, 10);
    if (w > 0) return static_cast<unsigned>(w);
  }
  return rmst::default_workers();
}

rmst::TauPolicy parse_tau_policy(const std::string& name) {
  if (name == "error") return rmst::TauPolicy::Error;
  if (name == "last") return rmst::TauPolicy::Extend;
  throw CLI::ValidationError("--tau-extend", "expected 'last' or 'error'");
}

bool csv_has_column(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw rmst::Error("cannot open file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw rmst::EmptyDatasetError(path + ": empty file");
  std::istringstream hs(header);
  std::string cell;
  while (std::getline(hs, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    if (cell == column) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct DesignFlags {
  std::string input_path;
  double tau = 0.0;
  double delta = 0.0;
  double alpha = 0.05;
  double power = 0.8;
  double pi = 0.5;
  std::vector<std::string> covariates;
  std::string grid_text;
  std::string format = "table";
  std::string tau_extend = "error";
  bool drop_missing = false;
};

void add_design_flags(CLI::App* cmd, DesignFlags& f, const char* input_flag,
                      const char* input_desc) {
  cmd->add_option(input_flag, f.input_path, input_desc)->required();
  cmd->add_option("--tau", f.tau, "truncation time for the RMST")->required();
  cmd->add_option("--delta", f.delta, "RMST difference the study must detect")->required();
  cmd->add_option("--alpha", f.alpha, "two-sided significance level")->capture_default_str();
  cmd->add_option("--power", f.power, "target power")->capture_default_str();
  cmd->add_option("--pi", f.pi, "treatment allocation probability")->capture_default_str();
  cmd->add_option("--covariates", f.covariates, "covariate columns for the augmented test")
      ->delimiter(',');
  cmd->add_option("--n-grid", f.grid_text, "sample-size grid start:step:max (default 10:10:2000)");
  cmd->add_option("--format", f.format, "table, csv or json")->capture_default_str();
  cmd->add_option("--tau-extend", f.tau_extend,
                  "policy when tau exceeds follow-up: error|last")->capture_default_str();
  cmd->add_flag("--drop-missing", f.drop_missing,
                "drop rows with missing values instead of failing");
}

rmst::SurvivalDataset load_input(const DesignFlags& f, std::size_t* dropped,
                                 const std::optional<std::string>& arm_column = {}) {
  rmst::LoadOptions opts;
  opts.covariate_columns = f.covariates;
  opts.arm_column = arm_column;
  opts.missing = f.drop_missing ? rmst::MissingPolicy::Drop : rmst::MissingPolicy::Reject;
  rmst::LoadResult r = rmst::load_csv(f.input_path, opts);
  if (dropped) *dropped = r.dropped_rows;
  return std::move(r.data);
}

int emit_design_report(const rmst::DesignReport& report, const DesignFlags& f,
                       const std::string& command_line, std::size_t dropped) {
  const auto& diag = report.diagnostics;
  const Format format = parse_format(f.format);
  if (format == Format::Json) {
    json out;
    out["version"] = rmst::kVersion;
    out["command"] = command_line;
    out["diagnostics"] = {{"s0_at_tau", diag.s0_at_tau},
                          {"g_at_tau", diag.g_at_tau},
                          {"e2", diag.e2},
                          {"sigma_tilde_sq", diag.sigma_tilde},
                          {"n_subjects", diag.n_subjects},
                          {"n_events", diag.n_events},
                          {"dropped_rows", dropped},
                          {"warnings", diag.warnings}};
    out["curve"] = json::array();
    for (const auto& [n, p] : report.curve.rows) {
      out["curve"].push_back({{"n", n}, {"power", p}});
    }
    if (report.curve.recommended_n) {
      out["recommended_n"] = *report.curve.recommended_n;
      out["v_at_recommended"] = diag.v_at_recommended;
    } else {
      out["recommended_n"] = nullptr;
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else if (format == Format::Csv) {
    print_header(command_line);
    std::printf("n,predicted_power,recommended\n");
    for (const auto& [n, p] : report.curve.rows) {
      const bool rec = report.curve.recommended_n && *report.curve.recommended_n == n;
      std::printf("%ld,%.6f,%d\n", n, p, rec ? 1 : 0);
    }
  } else {
    print_header(command_line);
    std::printf("# assumes a censoring distribution common to both arms\n");
    for (const auto& w : diag.warnings) std::printf("# warning: %s\n", w.c_str());
    if (dropped > 0) std::printf("# dropped rows with missing values: %zu\n", dropped);
    std::printf("subjects=%zu events=%zu S0(tau)=%.3f G(tau)=%.3f e2=%.6g sigma_tilde^2=%.6g\n",
                diag.n_subjects, diag.n_events, diag.s0_at_tau, diag.g_at_tau, diag.e2,
                diag.sigma_tilde);
    std::printf("\n%8s %16s\n", "n", "predicted power");
    for (const auto& [n, p] : report.curve.rows) {
      const bool rec = report.curve.recommended_n && *report.curve.recommended_n == n;
      std::printf("%8ld %16.3f%s\n", n, p, rec ? "  <- recommended" : "");
    }
    if (report.curve.recommended_n) {
      std::printf("\nrecommended n = %ld (v = %.6g)\n", *report.curve.recommended_n,
                  diag.v_at_recommended);
    } else {
      std::printf("\ntarget power %.3f not reached by n = %ld\n", f.power,
                  report.curve.rows.empty() ? 0 : report.curve.rows.back().first);
    }
  }
  return report.curve.recommended_n ? kExitOk : kExitTargetUnreachable;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int run_design(const DesignFlags& f, const std::string& command_line) {
  std::size_t dropped = 0;
  const rmst::SurvivalDataset reference = load_input(f, &dropped);
  const rmst::DesignReport report =
      rmst::design_stage(reference, f.tau, f.alpha, f.power, f.delta, f.pi, f.covariates,
                         parse_grid(f.grid_text, 10), parse_tau_policy(f.tau_extend));
  return emit_design_report(report, f, command_line, dropped);
}

int run_recalc(const DesignFlags& f, const std::string& arm_column, bool force_ignore_arm,
               const std::string& command_line) {
  if (csv_has_column(f.input_path, arm_column) && !force_ignore_arm) {
    throw rmst::Error("blinded file contains the arm column '" + arm_column +
                      "'; pass --force-ignore-arm to proceed without reading it");
  }
  std::size_t dropped = 0;
  const rmst::SurvivalDataset blinded = load_input(f, &dropped);
  const long n_mid = static_cast<long>(blinded.size());
  const rmst::DesignReport report = rmst::midtrial_recalc(
      blinded, f.tau, f.alpha, f.power, f.delta, f.pi, f.covariates,
      parse_grid(f.grid_text, std::max<long>(n_mid, 10)), parse_tau_policy(f.tau_extend));
  return emit_design_report(report, f, command_line, dropped);
}

void print_test_rows(const std::vector<rmst::TestResult>& rows, Format format,
                     const std::string& command_line, double alpha) {
  if (format == Format::Json) {
    json out;
    out["version"] = rmst::kVersion;
    out["command"] = command_line;
    out["alpha"] = alpha;
    out["results"] = json::array();
    for (const auto& r : rows) {
      out["results"].push_back({{"method", r.method},
                                {"estimate", r.estimate},
                                {"std_error", r.std_error},
                                {"z", r.z_value},
                                {"p_value", r.p_value},
                                {"ci_lower", r.ci_lower},
                                {"ci_upper", r.ci_upper},
                                {"n", r.n}});
    }
    std::printf("%s\n", out.dump(2).c_str());
    return;
  }
  print_header(command_line);
  if (format == Format::Csv) {
    std::printf("method,estimate,std_error,z,p_value,ci_lower,ci_upper,n\n");
    for (const auto& r : rows) {
      std::printf("%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%zu\n", r.method.c_str(), r.estimate,
                  r.std_error, r.z_value, r.p_value, r.ci_lower, r.ci_upper, r.n);
    }
    return;
  }
  std::printf("%-22s %20s %26s %10s\n", "method", "difference (SE)",
              "confidence interval", "p-value");
  for (const auto& r : rows) {
    char est[64], ci[64];
    std::snprintf(est, sizeof est, "%.4g (%.4g)", r.estimate, r.std_error);
    std::snprintf(ci, sizeof ci, "(%.4g, %.4g)", r.ci_lower, r.ci_upper);
    std::printf("%-22s %20s %26s %10.3f\n", r.method.c_str(), est, ci, r.p_value);
  }
}

int run_analyze(const std::string& path, const std::string& arm_col, double tau,
                double alpha, double pi, const std::vector<std::string>& covariates,
                const std::string& variance, bool drop_missing,
                const std::string& tau_extend, const std::string& format_text,
                const std::string& command_line) {
  rmst::LoadOptions opts;
  opts.arm_column = arm_col;
  opts.covariate_columns = covariates;
  opts.missing = drop_missing ? rmst::MissingPolicy::Drop : rmst::MissingPolicy::Reject;
  const rmst::SurvivalDataset data = rmst::load_csv(path, opts).data;

  const rmst::VarianceKind kind = variance == "plugin" ? rmst::VarianceKind::Plugin
                                                       : rmst::VarianceKind::Influence;
  if (variance != "plugin" && variance != "influence") {
    throw CLI::ValidationError("--variance", "expected 'influence' or 'plugin'");
  }
  const rmst::TauPolicy policy = parse_tau_policy(tau_extend);

  std::vector<rmst::TestResult> rows;
  rows.push_back(rmst::rmst_test(data, tau, alpha, pi, {}, kind, policy));
  if (!covariates.empty()) {
    rows.push_back(rmst::rmst_test(data, tau, alpha, pi, covariates, kind, policy));
  }
  print_test_rows(rows, parse_format(format_text), command_line, alpha);
  return kExitOk;
}

int run_select(const DesignFlags& f, long at_n, const std::string& command_line) {
  std::size_t dropped = 0;
  const rmst::SurvivalDataset reference = load_input(f, &dropped);
  const rmst::TauPolicy policy = parse_tau_policy(f.tau_extend);

  // power column: plug each cumulative e2 into the local power formula at --at-n
  const auto times = reference.times();
  const auto events = reference.events();
  const rmst::StepFunction s0 = rmst::kaplan_meier(times, events);
  const rmst::StepFunction g = rmst::censoring_km(times, events);
  const rmst::StepFunction lam = rmst::nelson_aalen(times, events);
  auto power_of_e2 = [&](double e2) {
    const rmst::DesignInputs in = rmst::make_design_inputs(s0, g, lam, f.tau, f.alpha,
                                                           f.power, f.delta, f.pi, e2);
    return rmst::predicted_power(in, at_n);
  };

  const rmst::SelectionTrace trace =
      rmst::stepwise_select(reference, f.tau, f.covariates, power_of_e2, f.pi, policy);

  const Format format = parse_format(f.format);
  if (format == Format::Json) {
    json out;
    out["version"] = rmst::kVersion;
    out["command"] = command_line;
    out["at_n"] = at_n;
    out["baseline_power"] = trace.baseline_power;
    out["steps"] = json::array();
    for (const auto& s : trace.steps) {
      out["steps"].push_back({{"added", s.added},
                              {"e2", s.e2},
                              {"predicted_power", s.predicted_power},
                              {"skipped", s.skipped}});
    }
    std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
  }
  print_header(command_line);
  if (format == Format::Csv) {
    std::printf("step,variable,e2,predicted_power\n");
    std::printf("0,,,%.6f\n", trace.baseline_power);
    std::size_t k = 1;
    for (const auto& s : trace.steps) {
      if (s.added.empty()) continue;
      std::printf("%zu,+%s,%.6g,%.6f\n", k++, s.added.c_str(), s.e2, s.predicted_power);
    }
  } else {
    std::printf("%4s  %-24s %14s %10s\n", "step", "variable", "e2", "power");
    std::printf("%4d  %-24s %14s %10.3f\n", 0, "", "", trace.baseline_power);
    std::size_t k = 1;
    for (const auto& s : trace.steps) {
      for (const auto& skip : s.skipped) {
        std::printf("# warning: '%s' skipped (collinear with the current set)\n",
                    skip.c_str());
      }
      if (s.added.empty()) continue;
      std::printf("%4zu  +%-23s %14.6g %10.3f\n", k++, s.added.c_str(), s.e2,
                  s.predicted_power);
    }
  }
  return kExitOk;
}

struct SimulateFlags {
  int table = 1;
  std::string scenario = "sData2a";
  std::size_t reps = 2000;
  std::size_t reference_reps = 2000;
  std::uint64_t seed = 1;
  std::size_t n = 500;
  std::size_t n_mid = 200;
  double target_power = 0.8;
  long n_cap = 2000;
  std::string method = "both";
  unsigned workers = 0;
  std::string format = "table";
  std::string dump_path;
  std::uint64_t dump_rep = 0;
  std::string dump_reference = "none";
};

int run_simulate(const SimulateFlags& f, const std::string& command_line) {
  const rmst::Scenario scenario = rmst::parse_scenario(f.scenario);
  const unsigned workers = workers_from(f.workers);
  const Format format = parse_format(f.format);

  if (!f.dump_path.empty()) {
    rmst::ScenarioSpec spec;
    spec.scenario = scenario;
    spec.seed = f.seed;
    spec.n = f.n;
    const rmst::ReferenceKind kind = rmst::parse_reference_kind(f.dump_reference);
    if (kind == rmst::ReferenceKind::None) {
      rmst::write_csv(rmst::generate_target(spec, f.dump_rep, f.n), f.dump_path);
    } else {
      spec.reference_kind = kind;
      spec.n_reference = f.n;
      rmst::write_csv(rmst::generate_reference(spec, f.dump_rep), f.dump_path);
    }
    std::fprintf(stderr, "wrote %zu subjects to %s\n", f.n, f.dump_path.c_str());
    return kExitOk;
  }

  if (f.table == 1) {
    const rmst::Table1Row row =
        rmst::table1_run(scenario, f.n, f.reps, f.reference_reps, f.seed, workers);
    if (format == Format::Json) {
      json out;
      out["version"] = rmst::kVersion;
      out["command"] = command_line;
      out["row"] = {{"scenario", f.scenario},
                    {"n", row.n},
                    {"reps", row.reps},
                    {"reference_reps", row.reference_reps},
                    {"true_diff", row.theta_alt},
                    {"power_unadjusted", row.power_unadjusted},
                    {"power_augmented", row.power_augmented},
                    {"se_unadjusted", row.se_unadjusted},
                    {"se_augmented", row.se_augmented},
                    {"cpp_unadjusted", row.cpp_unadjusted},
                    {"cpp_augmented", row.cpp_augmented},
                    {"mpp_unadjusted", row.mpp_unadjusted},
                    {"mpp_augmented", row.mpp_augmented},
                    {"reference_failures", row.reference_failures}};
      std::printf("%s\n", out.dump(2).c_str());
      return kExitOk;
    }
    print_header(command_line);
    std::printf("dataset,test,power,se,cPP,mPP\n");
    std::printf("%s,augmented,%.3f,%.4f,%.3f,%.3f\n", f.scenario.c_str(),
                row.power_augmented, row.se_augmented, row.cpp_augmented, row.mpp_augmented);
    std::printf("%s,unadjusted,%.3f,%.4f,%.3f,%.3f\n", f.scenario.c_str(),
                row.power_unadjusted, row.se_unadjusted, row.cpp_unadjusted,
                row.mpp_unadjusted);
    return kExitOk;
  }

  if (f.table != 2) throw CLI::ValidationError("--table", "expected 1 or 2");
  std::vector<rmst::TestMethod> methods;
  if (f.method == "both") {
    methods = {rmst::TestMethod::Unadjusted, rmst::TestMethod::Augmented};
  } else {
    methods = {rmst::parse_method(f.method)};
  }
  json json_rows = json::array();
  if (format != Format::Json) {
    print_header(command_line);
    std::printf("n_mid,test,dataset,power,se,min,q1,median,q3,max,cap_hits,skipped\n");
  }
  for (const rmst::TestMethod m : methods) {
    const rmst::Table2Row row = rmst::table2_run(scenario, m, f.n_mid, f.target_power,
                                                 f.reps, f.seed, workers, f.n_cap);
    if (format == Format::Json) {
      json_rows.push_back({{"scenario", f.scenario},
                           {"method", rmst::method_name(m)},
                           {"n_mid", row.n_mid},
                           {"reps", row.reps},
                           {"theta_alt", row.theta_alt},
                           {"power", row.power},
                           {"se", row.se_power},
                           {"n_min", row.n_min},
                           {"n_q1", row.n_q1},
                           {"n_median", row.n_median},
                           {"n_q3", row.n_q3},
                           {"n_max", row.n_max},
                           {"cap_hits", row.cap_hits},
                           {"support_failures", row.support_failures}});
    } else {
      std::printf("%zu,%s,%s,%.3f,%.4f,%ld,%ld,%ld,%ld,%ld,%zu,%zu\n", row.n_mid,
                  rmst::method_name(m).c_str(), f.scenario.c_str(), row.power, row.se_power,
                  row.n_min, row.n_q1, row.n_median, row.n_q3, row.n_max, row.cap_hits,
                  row.support_failures);
    }
  }
  if (format == Format::Json) {
    json out;
    out["version"] = rmst::kVersion;
    out["command"] = command_line;
    out["rows"] = json_rows;
    std::printf("%s\n", out.dump(2).c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string command_line = joined_args(argc, argv);
  CLI::App app{"RMST-based trial design, blinded re-estimation and analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rmst::kVersion);

  // design
  DesignFlags design;
  CLI::App* cmd_design = app.add_subcommand(
      "design", "size a study from reference data with the local power formula");
  add_design_flags(cmd_design, design, "--reference", "reference dataset CSV");

  // recalc
  DesignFlags recalc;
  std::string arm_column = "arm";
  bool force_ignore_arm = false;
  CLI::App* cmd_recalc = app.add_subcommand(
      "recalc", "blinded mid-trial sample size recalculation from pooled data");
  add_design_flags(cmd_recalc, recalc, "--blinded", "blinded pooled dataset CSV");
  cmd_recalc->add_option("--arm-column", arm_column,
                         "arm column name the file must NOT contain")->capture_default_str();
  cmd_recalc->add_flag("--force-ignore-arm", force_ignore_arm,
                       "proceed even if the file contains the arm column");

  // analyze
  std::string an_path, an_arm, an_variance = "influence", an_format = "table",
              an_tau_extend = "error";
  double an_tau = 0.0, an_alpha = 0.05, an_pi = 0.5;
  std::vector<std::string> an_covariates;
  bool an_drop_missing = false;
  CLI::App* cmd_analyze =
      app.add_subcommand("analyze", "final analysis: RMST difference tests");
  cmd_analyze->add_option("--data", an_path, "trial dataset CSV")->required();
  cmd_analyze->add_option("--arm", an_arm, "treatment arm column")->required();
  cmd_analyze->add_option("--tau", an_tau, "truncation time")->required();
  cmd_analyze->add_option("--alpha", an_alpha, "two-sided significance level")->capture_default_str();
  cmd_analyze->add_option("--pi", an_pi, "design allocation probability")->capture_default_str();
  cmd_analyze->add_option("--covariates", an_covariates, "covariates for the augmented test")
      ->delimiter(',');
  cmd_analyze->add_option("--variance", an_variance,
                          "unadjusted variance form: influence|plugin")->capture_default_str();
  cmd_analyze->add_option("--format", an_format, "table, csv or json")->capture_default_str();
  cmd_analyze->add_option("--tau-extend", an_tau_extend, "error|last")->capture_default_str();
  cmd_analyze->add_flag("--drop-missing", an_drop_missing, "drop rows with missing values");

  // select
  DesignFlags select;
  long at_n = 0;
  CLI::App* cmd_select = app.add_subcommand(
      "select", "stepwise covariate selection maximizing the e2 gain");
  add_design_flags(cmd_select, select, "--reference", "reference dataset CSV");
  cmd_select->add_option("--at-n", at_n, "sample size for the power column")->required();

  // simulate
  SimulateFlags sim;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "Monte Carlo operating characteristics");
  cmd_simulate->add_option("--table", sim.table, "1 = size/power, 2 = adaptive n")->capture_default_str();
  cmd_simulate->add_option("--scenario", sim.scenario, "sData1a..sData3b")->capture_default_str();
  cmd_simulate->add_option("--reps", sim.reps, "replications")->capture_default_str();
  cmd_simulate->add_option("--reference-reps", sim.reference_reps,
                           "reference draws for cPP/mPP (table 1)")->capture_default_str();
  cmd_simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  cmd_simulate->add_option("--n", sim.n, "subjects per dataset")->capture_default_str();
  cmd_simulate->add_option("--n-mid", sim.n_mid, "blinded-look size (table 2)")->capture_default_str();
  cmd_simulate->add_option("--target-power", sim.target_power, "table-2 target")->capture_default_str();
  cmd_simulate->add_option("--n-cap", sim.n_cap, "table-2 grid cap")->capture_default_str();
  cmd_simulate->add_option("--method", sim.method, "unadjusted|augmented|both")->capture_default_str();
  cmd_simulate->add_option("--workers", sim.workers,
                           "worker threads (default: RMST_DESIGN_WORKERS or all cores)");
  cmd_simulate->add_option("--format", sim.format, "table, csv or json")->capture_default_str();
  cmd_simulate->add_option("--dump", sim.dump_path, "write one generated dataset to CSV");
  cmd_simulate->add_option("--rep", sim.dump_rep, "replication index for --dump")->capture_default_str();
  cmd_simulate->add_option("--reference", sim.dump_reference,
                           "dump a reference draw: none|correctly_matched|mis_matched")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*cmd_design) return run_design(design, command_line);
    if (*cmd_recalc) return run_recalc(recalc, arm_column, force_ignore_arm, command_line);
    if (*cmd_analyze) {
      return run_analyze(an_path, an_arm, an_tau, an_alpha, an_pi, an_covariates,
                         an_variance, an_drop_missing, an_tau_extend, an_format,
                         command_line);
    }
    if (*cmd_select) return run_select(select, at_n, command_line);
    if (*cmd_simulate) return run_simulate(sim, command_line);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const rmst::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
