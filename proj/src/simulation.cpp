#include "rmstdesign/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "rmstdesign/rng.hpp"
#include "rmstdesign/stats.hpp"

namespace rmst {

namespace {

// key-space tags so target and reference streams never collide
constexpr std::uint64_t kTargetStream = 0x7461726765740001ULL;
constexpr std::uint64_t kReferenceCorrect = 0x7265666372740002ULL;
constexpr std::uint64_t kReferenceMis = 0x7265666d69730003ULL;

double treated_failure_time(Scenario s, double unit_exponential) {
  const double lam0 = control_hazard();
  switch (s) {
    case Scenario::SData1a:
    case Scenario::SData1b:
      return unit_exponential / lam0;
    case Scenario::SData2a:
    case Scenario::SData2b:
      return unit_exponential / (0.7 * lam0);
    case Scenario::SData3a:
    case Scenario::SData3b: {
      // hazard lam0 on [0,1), lam2 afterwards; invert the cumulative hazard
      const double lam2 = -std::log(0.5) / 5.0;
      return unit_exponential < lam0 ? unit_exponential / lam0
                                     : 1.0 + (unit_exponential - lam0) / lam2;
    }
  }
  throw std::logic_error("unknown scenario");
}

SubjectDraw draw_subject(Scenario s, bool reference, ReferenceKind kind, std::uint64_t seed,
                         std::uint64_t replication, std::uint64_t index) {
  const std::uint64_t stream =
      !reference ? kTargetStream
                 : (kind == ReferenceKind::MisMatched ? kReferenceMis : kReferenceCorrect);
  KeyedRng rng(seed, stream, replication, index);

  SubjectDraw d;
  double eps_u;
  for (;;) {
    d.b1 = rng.next_normal();
    d.b2 = rng.next_normal();
    const double e1 = rng.next_normal();
    const double e2 = rng.next_normal();
    eps_u = rng.next_normal();
    d.v1 = d.b1 + e1;
    d.v2 = d.b2 + e2;
    if (reference && kind == ReferenceKind::MisMatched && !(d.v1 < 1.0 && d.v2 < 1.0)) {
      continue;  // biased sampling: only subjects with V1 < 1 and V2 < 1
    }
    break;
  }

  d.u = scenario_covariate_dependent(s)
            ? normal_cdf((d.b1 + d.b2 + eps_u) / std::sqrt(3.0))
            : normal_cdf(eps_u);
  d.arm = (!reference && rng.next_bernoulli(0.5)) ? 1 : 0;

  const double e = -std::log(d.u);  // unit exponential (U uniform on (0,1))
  d.t = d.arm == 1 ? treated_failure_time(s, e) : e / control_hazard();
  d.c = censoring_maximum() * rng.next_uniform();
  d.x = std::min(d.t, d.c);
  d.event = d.t <= d.c ? 1 : 0;
  return d;
}

SubjectRecord to_record(const SubjectDraw& d) {
  SubjectRecord r;
  r.time = d.x;
  r.event = d.event;
  r.arm = d.arm;
  r.covariates = {d.v1, d.v2};
  return r;
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "sData1a") return Scenario::SData1a;
  if (name == "sData1b") return Scenario::SData1b;
  if (name == "sData2a") return Scenario::SData2a;
  if (name == "sData2b") return Scenario::SData2b;
  if (name == "sData3a") return Scenario::SData3a;
  if (name == "sData3b") return Scenario::SData3b;
  throw std::invalid_argument("unknown scenario: " + name +
                              " (expected sData1a..sData3b)");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::SData1a: return "sData1a";
    case Scenario::SData1b: return "sData1b";
    case Scenario::SData2a: return "sData2a";
    case Scenario::SData2b: return "sData2b";
    case Scenario::SData3a: return "sData3a";
    case Scenario::SData3b: return "sData3b";
  }
  return "?";
}

bool scenario_is_null(Scenario s) {
  return s == Scenario::SData1a || s == Scenario::SData1b;
}

bool scenario_covariate_dependent(Scenario s) {
  return s == Scenario::SData1a || s == Scenario::SData2a || s == Scenario::SData3a;
}

double scenario_tau() { return 5.0; }

double control_hazard() { return -std::log(0.2) / 5.0; }

double censoring_maximum() { return 8.0; }

double true_rmst_diff(Scenario s) {
  const double lam0 = control_hazard();
  const double tau = scenario_tau();
  auto rmst_exp = [tau](double lam) { return (1.0 - std::exp(-lam * tau)) / lam; };
  switch (s) {
    case Scenario::SData1a:
    case Scenario::SData1b:
      return 0.0;
    case Scenario::SData2a:
    case Scenario::SData2b:
      return rmst_exp(0.7 * lam0) - rmst_exp(lam0);
    case Scenario::SData3a:
    case Scenario::SData3b: {
      const double lam2 = -std::log(0.5) / 5.0;
      const double treated = (1.0 - std::exp(-lam0)) / lam0 +
                             std::exp(-lam0) * (1.0 - std::exp(-(tau - 1.0) * lam2)) / lam2;
      return treated - rmst_exp(lam0);
    }
  }
  throw std::logic_error("unknown scenario");
}

ReferenceKind parse_reference_kind(const std::string& name) {
  if (name == "none") return ReferenceKind::None;
  if (name == "correctly_matched" || name == "correct") return ReferenceKind::CorrectlyMatched;
  if (name == "mis_matched" || name == "mis") return ReferenceKind::MisMatched;
  throw std::invalid_argument("unknown reference kind: " + name);
}

SubjectDraw draw_target_subject(Scenario s, std::uint64_t seed, std::uint64_t replication,
                                std::uint64_t index) {
  return draw_subject(s, false, ReferenceKind::None, seed, replication, index);
}

SubjectDraw draw_reference_subject(Scenario s, ReferenceKind kind, std::uint64_t seed,
                                   std::uint64_t replication, std::uint64_t index) {
  if (kind == ReferenceKind::None) {
    throw std::invalid_argument("draw_reference_subject: reference kind is none");
  }
  return draw_subject(s, true, kind, seed, replication, index);
}

SurvivalDataset generate_target(const ScenarioSpec& spec, std::uint64_t replication,
                                std::size_t n) {
  SurvivalDataset d;
  d.has_arm = true;
  d.covariate_names = {"V1", "V2"};
  d.subjects.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.subjects.push_back(to_record(draw_target_subject(spec.scenario, spec.seed, replication, i)));
  }
  return d;
}

SurvivalDataset generate_reference(const ScenarioSpec& spec, std::uint64_t replication) {
  SurvivalDataset d;
  d.has_arm = false;
  d.covariate_names = {"V1", "V2"};
  d.subjects.reserve(spec.n_reference);
  for (std::size_t i = 0; i < spec.n_reference; ++i) {
    d.subjects.push_back(to_record(
        draw_reference_subject(spec.scenario, spec.reference_kind, spec.seed, replication, i)));
  }
  return d;
}

std::pair<SurvivalDataset, std::optional<SurvivalDataset>> generate(
    const ScenarioSpec& spec, std::uint64_t replication) {
  SurvivalDataset target = generate_target(spec, replication, spec.n);
  std::optional<SurvivalDataset> reference;
  if (spec.reference_kind != ReferenceKind::None) {
    reference = generate_reference(spec, replication);
  }
  return {std::move(target), std::move(reference)};
}

}  // namespace rmst
