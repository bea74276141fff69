#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "rmstdesign/dataset.hpp"

namespace rmst {

// The six built-in scenarios: 1 = null, 2 = proportional hazards, 3 = delayed
// effect; 'a' couples survival to the covariates, 'b' leaves it independent.
enum class Scenario { SData1a, SData1b, SData2a, SData2b, SData3a, SData3b };

Scenario parse_scenario(const std::string& name);  // "sData2a" etc.
std::string scenario_name(Scenario s);
bool scenario_is_null(Scenario s);
bool scenario_covariate_dependent(Scenario s);

// Fixed design constants shared by all scenarios.
double scenario_tau();       // 5
double control_hazard();     // -ln(0.2)/5
double censoring_maximum();  // Uniform(0, 8) censoring

// Closed-form RMST difference at tau = 5.
double true_rmst_diff(Scenario s);

enum class ReferenceKind { None, CorrectlyMatched, MisMatched };

ReferenceKind parse_reference_kind(const std::string& name);

struct ScenarioSpec {
  Scenario scenario = Scenario::SData2a;
  std::size_t n = 500;
  ReferenceKind reference_kind = ReferenceKind::None;
  std::size_t n_reference = 200;
  std::uint64_t seed = 0;
};

// One generated subject with its latent values (kept for validation of the
// marginal and copula structure; datasets only carry x/event/arm/V).
struct SubjectDraw {
  double t = 0.0;   // latent failure time
  double c = 0.0;   // latent censoring time
  double x = 0.0;   // min(t, c)
  int event = 0;
  int arm = 0;
  double v1 = 0.0, v2 = 0.0;
  double u = 0.0;            // uniform driving the failure time
  double b1 = 0.0, b2 = 0.0; // shared normal components of V1/V2
};

// Deterministic draws keyed by (seed, replication, subject index): the same
// key gives the same subject no matter the calling order or thread layout.
SubjectDraw draw_target_subject(Scenario s, std::uint64_t seed, std::uint64_t replication,
                                std::uint64_t index);
SubjectDraw draw_reference_subject(Scenario s, ReferenceKind kind, std::uint64_t seed,
                                   std::uint64_t replication, std::uint64_t index);

// Two-arm target dataset of n subjects (covariates V1, V2, arm present).
SurvivalDataset generate_target(const ScenarioSpec& spec, std::uint64_t replication,
                                std::size_t n);

// Single-arm reference dataset (no arm column) of spec.n_reference subjects.
SurvivalDataset generate_reference(const ScenarioSpec& spec, std::uint64_t replication);

// Target dataset plus the reference draw requested by spec.reference_kind.
std::pair<SurvivalDataset, std::optional<SurvivalDataset>> generate(
    const ScenarioSpec& spec, std::uint64_t replication);

}  // namespace rmst
