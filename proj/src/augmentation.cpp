#include "rmstdesign/augmentation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rmstdesign/errors.hpp"

namespace rmst {

namespace {

constexpr double kConditionGuard = 1e12;
constexpr double kConditionWarn = 1e9;

Eigen::MatrixXd covariate_matrix(const SurvivalDataset& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  const auto p = static_cast<Eigen::Index>(d.covariate_arity());
  Eigen::MatrixXd v(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = d.subjects[static_cast<std::size_t>(i)].covariates;
    for (Eigen::Index j = 0; j < p; ++j) v(i, j) = row[static_cast<std::size_t>(j)];
  }
  return v;
}

std::string offending_covariates(const SurvivalDataset& d, const Eigen::VectorXd& null_vec) {
  const double top = null_vec.cwiseAbs().maxCoeff();
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index j = 0; j < null_vec.size(); ++j) {
    if (std::fabs(null_vec(j)) >= 0.5 * top) {
      if (!first) os << ", ";
      os << d.covariate_names[static_cast<std::size_t>(j)];
      first = false;
    }
  }
  return os.str();
}

// Eigendecomposition of a symmetric PSD Gram with the condition-number guard.
struct GramInverse {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  bool rank_deficient = false;

  GramInverse(const Eigen::MatrixXd& gram, const SurvivalDataset& d) : eig(gram) {
    const auto& ev = eig.eigenvalues();
    const double lo = ev.minCoeff();
    const double hi = ev.maxCoeff();
    if (!(hi > 0.0) || lo <= 0.0 || hi / lo > kConditionGuard) {
      const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
      std::ostringstream os;
      os << "covariate Gram matrix is numerically singular (condition number " << cond
         << "); offending covariates: " << offending_covariates(d, eig.eigenvectors().col(0));
      throw SingularGramError(os.str());
    }
    rank_deficient = hi / lo > kConditionWarn;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    const auto& q = eig.eigenvectors();
    return q * (q.transpose() * b).cwiseQuotient(eig.eigenvalues());
  }

  // b' Gram^{-1} b = sum (q_j' b)^2 / lambda_j, nonnegative by construction.
  double quadratic_form(const Eigen::VectorXd& b) const {
    const Eigen::VectorXd proj = eig.eigenvectors().transpose() * b;
    double s = 0.0;
    for (Eigen::Index j = 0; j < proj.size(); ++j) {
      s += proj(j) * proj(j) / eig.eigenvalues()(j);
    }
    return s;
  }
};

std::vector<double> c_hat_from_fit(const SurvivalDataset& d, const RmstFit& fit, double pi) {
  const Eigen::MatrixXd v = covariate_matrix(d);
  const Eigen::Index n = v.rows();
  const Eigen::Index p = v.cols();

  const Eigen::MatrixXd gram = pi * (1.0 - pi) * (v.transpose() * v);
  const GramInverse inv(gram, d);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = d.subjects[static_cast<std::size_t>(i)];
    rhs += (s.arm - pi) * fit.influence[static_cast<std::size_t>(i)] * v.row(i).transpose();
  }
  const Eigen::VectorXd c = inv.solve(rhs);
  return {c.data(), c.data() + c.size()};
}

void check_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) {
    throw std::invalid_argument("allocation probability pi must lie in (0,1)");
  }
}

}  // namespace

double AugmentedFit::std_error() const {
  return std::sqrt(var_aug / static_cast<double>(base.n));
}

std::vector<double> c_hat(const SurvivalDataset& d, double tau, double pi, TauPolicy policy) {
  check_pi(pi);
  if (d.covariate_arity() == 0) {
    throw std::invalid_argument("c_hat: dataset has no covariates");
  }
  const RmstFit fit = rmst_fit(d, tau, policy);
  return c_hat_from_fit(d, fit, pi);
}

double augmentation_term(const SurvivalDataset& d, double pi, const std::vector<double>& c) {
  check_pi(pi);
  if (c.size() != d.covariate_arity()) {
    throw std::invalid_argument("augmentation_term: coefficient arity mismatch");
  }
  if (!d.has_arm) throw ArmAbsentError("augmentation_term: dataset has no arm column");
  double sum = 0.0;
  for (const auto& s : d.subjects) {
    double cv = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) cv += c[j] * s.covariates[j];
    sum += (s.arm - pi) * cv;
  }
  return sum / static_cast<double>(d.size());
}

AugmentedFit augmented_fit(const SurvivalDataset& d, double tau, double pi, TauPolicy policy) {
  check_pi(pi);
  AugmentedFit out;
  out.base = rmst_fit(d, tau, policy);
  out.pi = pi;
  double treated = 0.0;
  for (const auto& s : d.subjects) treated += s.arm;
  out.observed_allocation = treated / static_cast<double>(d.size());

  if (d.covariate_arity() == 0) {
    out.theta_aug = out.base.theta_diff;
    out.var_aug = out.base.var_influence;
    return out;
  }

  out.c_hat = c_hat_from_fit(d, out.base, pi);
  out.theta_aug = out.base.theta_diff - augmentation_term(d, pi, out.c_hat);

  double ss = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& s = d.subjects[i];
    double cv = 0.0;
    for (std::size_t j = 0; j < out.c_hat.size(); ++j) cv += out.c_hat[j] * s.covariates[j];
    const double r = out.base.influence[i] - (s.arm - pi) * cv;
    ss += r * r;
  }
  out.var_aug = ss / static_cast<double>(d.size());
  return out;
}

E2Estimate e2_hat(const SurvivalDataset& d, double tau, double pi, TauPolicy policy) {
  check_pi(pi);
  const std::size_t p = d.covariate_arity();
  if (p == 0) throw std::invalid_argument("e2_hat: dataset has no covariates");

  // Residuals carry the 1/(pi(1-pi)) allocation factor of the projected
  // influence function, so that pi(1-pi)*e2 equals the variance removed by
  // augmentation in the target trial.
  std::vector<double> m =
      martingale_integrals(d.times(), d.events(), tau, static_cast<double>(d.size()), policy);
  const double scale = 1.0 / (pi * (1.0 - pi));
  for (double& mi : m) mi *= scale;

  const Eigen::MatrixXd v = covariate_matrix(d);
  const double n = static_cast<double>(d.size());
  const Eigen::MatrixXd gram = (v.transpose() * v) / n;
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    cross += m[static_cast<std::size_t>(i)] * v.row(i).transpose();
  }
  cross /= n;

  const GramInverse inv(gram, d);

  E2Estimate out;
  out.p = p;
  out.rank_deficient = inv.rank_deficient;
  out.value = inv.quadratic_form(cross);
  out.cross_moments.assign(cross.data(), cross.data() + cross.size());
  out.gram.reserve(p * p);
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) out.gram.push_back(gram(i, j));
  }
  return out;
}

SelectionTrace stepwise_select(const SurvivalDataset& d, double tau,
                               const std::vector<std::string>& candidates,
                               const std::function<double(double)>& power_of_e2,
                               double pi, TauPolicy policy) {
  if (candidates.empty()) {
    throw std::invalid_argument("stepwise_select: no candidate covariates");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();

  SelectionTrace trace;
  trace.baseline_power = power_of_e2 ? power_of_e2(0.0) : nan;

  std::vector<std::string> selected;
  std::vector<std::string> remaining = candidates;
  while (!remaining.empty()) {
    SelectionStep step;
    double best = -1.0;
    std::size_t best_idx = remaining.size();
    std::vector<std::string> next_remaining;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      std::vector<std::string> with = selected;
      with.push_back(remaining[k]);
      double value;
      try {
        value = e2_hat(select_covariates(d, with), tau, pi, policy).value;
      } catch (const SingularGramError&) {
        step.skipped.push_back(remaining[k]);
        continue;  // dropped from this and later steps: the span only grows
      }
      if (value > best) {
        best = value;
        best_idx = k;
      }
      next_remaining.push_back(remaining[k]);
    }
    if (best_idx == remaining.size()) {
      // every remaining candidate is collinear with the current span
      if (!step.skipped.empty()) trace.steps.push_back(std::move(step));
      break;
    }
    step.added = remaining[best_idx];
    step.e2 = best;
    step.predicted_power = power_of_e2 ? power_of_e2(best) : nan;
    selected.push_back(step.added);
    next_remaining.erase(
        std::find(next_remaining.begin(), next_remaining.end(), step.added));
    remaining = std::move(next_remaining);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

}  // namespace rmst
