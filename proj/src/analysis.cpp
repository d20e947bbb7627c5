#include "fairrank/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairrank {

std::vector<double> lorenz_curve(std::span<const double> u) {
  std::vector<double> sorted(u.begin(), u.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i]) || sorted[i] < 0.0) {
      throw Error(ErrorCode::NegativeUtility,
                  "component " + std::to_string(i + 1) + " is negative or not finite");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  std::partial_sum(sorted.begin(), sorted.end(), sorted.begin());
  return sorted;
}

const char* to_string(Dominance d) noexcept {
  switch (d) {
    case Dominance::StrictLorenz: return "dominates";
    case Dominance::Dominated: return "dominated";
    case Dominance::Equal: return "equal";
    case Dominance::Incomparable: return "incomparable";
  }
  return "unknown";
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "vectors of length " + std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
  }
}

Dominance compare_pointwise(std::span<const double> a, std::span<const double> b, double tol) {
  bool some_above = false;
  bool some_below = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) some_above = true;
    if (a[i] < b[i] - tol) some_below = true;
  }
  if (some_above && some_below) return Dominance::Incomparable;
  if (some_above) return Dominance::StrictLorenz;
  if (some_below) return Dominance::Dominated;
  return Dominance::Equal;
}

}  // namespace

Dominance dominance(std::span<const double> u, std::span<const double> u_prime, double tol) {
  require_same_length(u, u_prime);
  return compare_pointwise(lorenz_curve(u), lorenz_curve(u_prime), tol);
}

Dominance pareto_dominance(std::span<const double> u, std::span<const double> u_prime, double tol) {
  require_same_length(u, u_prime);
  return compare_pointwise(u, u_prime, tol);
}

double gini(std::span<const double> u) {
  std::vector<double> sorted(u.begin(), u.end());
  std::sort(sorted.begin(), sorted.end());
  const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotal, "gini of a vector with zero total");
  // sum_{j,j'} |u_j - u_j'| = 2 sum_k (2k - n - 1) u_(k), k 1-based.
  const double n = static_cast<double>(sorted.size());
  double pair_sum = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    pair_sum += (2.0 * static_cast<double>(k + 1) - n - 1.0) * sorted[k];
  }
  return 2.0 * pair_sum / (2.0 * n * total);
}

double std_dev(std::span<const double> u) {
  if (u.empty()) return 0.0;
  const double n = static_cast<double>(u.size());
  const double mean = std::accumulate(u.begin(), u.end(), 0.0) / n;
  double acc = 0.0;
  for (double x : u) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / n);
}

const char* to_string(Ordering o) noexcept {
  switch (o) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    case Ordering::Greater: return "greater";
  }
  return "unknown";
}

Ordering leximin_compare(std::span<const double> u, std::span<const double> u_prime, double tol) {
  require_same_length(u, u_prime);
  std::vector<double> a(u.begin(), u.end());
  std::vector<double> b(u_prime.begin(), u_prime.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return Ordering::Greater;
    if (a[i] < b[i] - tol) return Ordering::Less;
  }
  return Ordering::Equal;
}

double quantile_cumulative(std::span<const double> curve, double fraction) {
  if (curve.empty()) return 0.0;
  const double raw = std::ceil(fraction * static_cast<double>(curve.size()) - 1e-9);
  const std::size_t count = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, curve.size());
  return curve[count - 1];
}

LorenzReport lorenz_report(std::span<const double> u) {
  LorenzReport r;
  r.curve = lorenz_curve(u);
  r.total = r.curve.empty() ? 0.0 : r.curve.back();
  r.gini = r.total > 0.0 ? gini(u) : 0.0;
  r.std_dev = std_dev(u);
  for (double f : {0.1, 0.25, 0.5, 1.0}) r.quantile_cums.emplace_back(f, quantile_cumulative(r.curve, f));
  return r;
}

RegretReport regret_bound_check(const ProblemInstance& inst, const Matrix& mu_hat, double alpha,
                                const SolverConfig& config, double eta) {
  if (alpha > 1.0) throw Error(ErrorCode::UnsupportedTheta, "the bound needs alpha <= 1");
  if (inst.mode == Mode::Reciprocal) {
    throw Error(ErrorCode::UnsupportedTheta, "the bound is stated for user/item instances");
  }
  if (mu_hat.rows() != inst.n_users() || mu_hat.cols() != inst.n_items()) {
    throw Error(ErrorCode::DimensionMismatch, "mu_hat must have the shape of mu");
  }
  ProblemInstance estimated = inst;
  estimated.mu_user = mu_hat;
  ensure_valid(estimated);

  const WelfareParams params{0.5, alpha, alpha, eta};
  const SolveResult hat = solve(estimated, make_welfare_objective(estimated, params), config);
  const SolveResult star = solve(inst, make_welfare_objective(inst, params), config);

  const UtilityProfile u_hat_true = utility_profile(hat.ranking, inst);
  const UtilityProfile u_star_true = star.utilities;
  const UtilityProfile u_star_est = utility_profile(star.ranking, estimated);

  RegretReport r;
  r.lhs = welfare(u_star_true, params).value - welfare(u_hat_true, params).value;

  double b = 0.0;
  for (double x : u_hat_true.values) b = std::max(b, psi_prime(x + eta, alpha));
  for (double x : u_star_est.values) b = std::max(b, psi_prime(x + eta, alpha));
  r.bound_b = b;

  double err = 0.0;
  for (std::size_t k = 0; k < mu_hat.values().size(); ++k) {
    const double d = mu_hat.values()[k] - inst.mu_user.values()[k];
    err += d * d;
  }
  r.estimation_error = std::sqrt(err);

  const std::size_t slots = config.slots.value_or(inst.slots());
  double v_sq = 0.0;
  for (std::size_t k = 0; k < slots; ++k) v_sq += inst.exposure_weights[k] * inst.exposure_weights[k];
  const double n = static_cast<double>(inst.n_users() + inst.n_items());
  r.rhs = 4.0 * b * std::sqrt(n * v_sq) * r.estimation_error;
  r.slack = std::max(0.0, hat.trace.final_gap) + std::max(0.0, star.trace.final_gap);
  r.holds = r.lhs <= r.rhs + r.slack;
  return r;
}

}  // namespace fairrank
