#include "fairrank/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairrank {

double psi(double x, double alpha) {
  if (alpha > 0.0) {
    if (x < 0.0) throw Error(ErrorCode::NonPositiveArgument, "psi of a negative utility");
    return std::pow(x, alpha);
  }
  if (!(x > 0.0)) {
    throw Error(ErrorCode::NonPositiveArgument,
                "psi(x, alpha) with alpha <= 0 needs x > 0 (add eta first)");
  }
  if (alpha == 0.0) return std::log(x);
  return -std::pow(x, alpha);
}

double psi_prime(double x, double alpha) {
  if (!(x > 0.0)) {
    if (x == 0.0 && alpha >= 1.0) return alpha == 1.0 ? 1.0 : 0.0;
    throw Error(ErrorCode::NonPositiveArgument, "psi' needs x > 0");
  }
  if (alpha == 0.0) return 1.0 / x;
  if (alpha == 1.0) return 1.0;
  return std::abs(alpha) * std::pow(x, alpha - 1.0);
}

double psi_curvature(double x, double alpha) {
  if (alpha == 1.0) return 0.0;
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "psi'' needs x > 0");
  if (alpha == 0.0) return 1.0 / (x * x);
  return std::abs(alpha * (alpha - 1.0)) * std::pow(x, alpha - 2.0);
}

bool WelfareParams::strictly_concave() const noexcept {
  return lambda > 0.0 && lambda < 1.0 && alpha1 < 1.0 && alpha2 < 1.0;
}

void WelfareParams::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "lambda must be in [0, 1]");
  }
  if (!(alpha1 <= 1.0) || !(alpha2 <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "alpha1 and alpha2 must be <= 1 for concavity");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::InvalidParameter, "eta must be a finite value >= 0");
  }
}

const char* to_string(PenaltyKind kind) noexcept {
  switch (kind) {
    case PenaltyKind::QualityWeighted: return "qua";
    case PenaltyKind::EqualExposure: return "expo";
    case PenaltyKind::EqualUtility: return "eq-util";
  }
  return "unknown";
}

void PenaltyParams::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidParameter, "beta must be a finite value >= 0");
  }
  if (!(sqrt_eps > 0.0)) throw Error(ErrorCode::InvalidParameter, "sqrt_eps must be > 0");
}

Evaluation welfare(const UtilityProfile& u, const WelfareParams& params) {
  Evaluation out;
  out.grad.assign(u.size(), 0.0);
  const bool single = u.single_population();
  const double user_weight = single ? 1.0 : 1.0 - params.lambda;
  const double item_weight = params.lambda;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool user_side = i < u.side_split;
    const double w = user_side ? user_weight : item_weight;
    const double alpha = user_side ? params.alpha1 : params.alpha2;
    const double x = u.values[i] + params.eta;
    out.value += w * psi(x, alpha);
    out.grad[i] = w * psi_prime(x, alpha);
  }
  return out;
}

Evaluation penalized_objective(const UtilityProfile& u, std::span<const double> targets,
                               const PenaltyParams& params, const ProblemInstance& inst) {
  Evaluation out;
  out.grad.assign(u.size(), 0.0);
  const double n = params.normalize_by_n ? static_cast<double>(inst.population()) : 1.0;

  if (params.kind == PenaltyKind::EqualUtility) {
    if (inst.mode != Mode::Reciprocal || !u.single_population()) {
      throw Error(ErrorCode::WrongModeForKind, "equality of utility needs a reciprocal profile");
    }
    const double count = static_cast<double>(u.size());
    const double mean = std::accumulate(u.values.begin(), u.values.end(), 0.0) / count;
    double dev = 0.0;
    for (double x : u.values) dev += (x - mean) * (x - mean);
    const double root = std::sqrt(dev / n + params.sqrt_eps);
    out.value = std::accumulate(u.values.begin(), u.values.end(), 0.0) - params.beta * root;
    // d/du_k sum_j (u_j - mean)^2 = 2 (u_k - mean); the mean-coupling term
    // sum_j (u_j - mean) vanishes identically.
    for (std::size_t k = 0; k < u.size(); ++k) {
      out.grad[k] = 1.0 - params.beta * (u.values[k] - mean) / (n * root);
    }
    return out;
  }

  auto items = u.items();
  if (targets.size() != items.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one exposure target per item is required");
  }
  double dev = 0.0;
  for (std::size_t j = 0; j < items.size(); ++j) dev += (items[j] - targets[j]) * (items[j] - targets[j]);
  const double root = std::sqrt(dev / n + params.sqrt_eps);
  auto users = u.users();
  out.value = std::accumulate(users.begin(), users.end(), 0.0) - params.beta * root;
  for (std::size_t i = 0; i < u.side_split; ++i) out.grad[i] = 1.0;
  for (std::size_t j = 0; j < items.size(); ++j) {
    out.grad[u.side_split + j] = -params.beta * (items[j] - targets[j]) / (n * root);
  }
  return out;
}

double pairwise_penalty(std::span<const double> u, std::span<const double> q) {
  if (u.size() != q.size()) throw Error(ErrorCode::LengthMismatch, "u and q differ in length");
  std::vector<double> ratio(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!(q[j] > 0.0)) throw Error(ErrorCode::ZeroQuality, "item " + std::to_string(j + 1) + " has zero quality");
    ratio[j] = u[j] / q[j];
  }
  double total = 0.0;
  for (double a : ratio) {
    for (double b : ratio) total += std::abs(a - b);
  }
  return total;
}

namespace {

struct SideGroups {
  std::vector<std::vector<std::size_t>> sets;
  double weight = 0.0;
  double alpha = 0.0;
};

void accumulate_group_side(const UtilityProfile& u, std::size_t offset, const SideGroups& side,
                           double eta, Evaluation& out) {
  for (const auto& members : side.sets) {
    double total = 0.0;
    for (std::size_t m : members) total += u.values[offset + m];
    const double x = total + eta;
    out.value += side.weight * psi(x, side.alpha);
    const double d = side.weight * psi_prime(x, side.alpha);
    for (std::size_t m : members) out.grad[offset + m] += d;
  }
}

std::vector<std::vector<std::size_t>> singletons(std::size_t n) {
  std::vector<std::vector<std::size_t>> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = {i};
  return s;
}

}  // namespace

Evaluation group_welfare(const UtilityProfile& u, const ProblemInstance& inst,
                         const WelfareParams& params) {
  if (!inst.groups) throw Error(ErrorCode::MissingGroups, "instance has no groups");
  Evaluation out;
  out.grad.assign(u.size(), 0.0);
  const std::size_t n_users = u.side_split;
  const std::size_t n_items = u.size() - u.side_split;
  const bool single = u.single_population();

  SideGroups users{inst.groups->users.empty() ? singletons(n_users) : inst.groups->users,
                   single ? 1.0 : 1.0 - params.lambda, params.alpha1};
  accumulate_group_side(u, 0, users, params.eta, out);
  if (!single) {
    SideGroups items{inst.groups->items.empty() ? singletons(n_items) : inst.groups->items,
                     params.lambda, params.alpha2};
    accumulate_group_side(u, n_users, items, params.eta, out);
  }
  return out;
}

Objective::Objective(std::string name, std::vector<std::pair<std::string, double>> params,
                     ProfileView view, Fn fn, std::optional<double> curvature_bound)
    : name_(std::move(name)),
      params_(std::move(params)),
      view_(view),
      fn_(std::move(fn)),
      curvature_bound_(curvature_bound) {}

namespace {

std::optional<double> welfare_curvature(const ProblemInstance& inst, const WelfareParams& p) {
  if (!(p.eta > 0.0)) {
    if (p.alpha1 == 1.0 && p.alpha2 == 1.0) return 0.0;
    return std::nullopt;
  }
  // psi'' is largest at the smallest argument, eta.
  const double user_weight = inst.mode == Mode::Reciprocal ? 1.0 : 1.0 - p.lambda;
  double b = user_weight * psi_curvature(p.eta, p.alpha1);
  if (inst.mode != Mode::Reciprocal) b = std::max(b, p.lambda * psi_curvature(p.eta, p.alpha2));
  return b;
}

}  // namespace

Objective make_welfare_objective(const ProblemInstance& inst, const WelfareParams& params) {
  params.validate();
  std::vector<std::pair<std::string, double>> desc{
      {"lambda", params.lambda}, {"alpha1", params.alpha1}, {"alpha2", params.alpha2}, {"eta", params.eta}};
  return Objective("welfare", std::move(desc), ProfileView::Native,
                   [params](const UtilityProfile& u) { return welfare(u, params); },
                   welfare_curvature(inst, params));
}

Objective make_penalized_objective(const ProblemInstance& inst, const PenaltyParams& params) {
  params.validate();
  std::vector<std::pair<std::string, double>> desc{{"beta", params.beta},
                                                    {"sqrt_eps", params.sqrt_eps},
                                                    {"normalize_by_n", params.normalize_by_n ? 1.0 : 0.0}};
  if (params.kind == PenaltyKind::EqualUtility) {
    if (inst.mode != Mode::Reciprocal) {
      throw Error(ErrorCode::WrongModeForKind, "eq-util is defined for reciprocal instances only");
    }
    return Objective(to_string(params.kind), std::move(desc), ProfileView::Native,
                     [params, inst](const UtilityProfile& u) {
                       return penalized_objective(u, {}, params, inst);
                     });
  }
  const TargetKind kind =
      params.kind == PenaltyKind::QualityWeighted ? TargetKind::QualityWeighted : TargetKind::Equal;
  std::vector<double> targets = exposure_targets(inst, kind).targets;
  // Only the shape and population of the instance are needed at evaluation.
  ProblemInstance shape;
  shape.mode = inst.mode;
  shape.mu_user = Matrix(inst.n_users(), inst.n_items());
  return Objective(to_string(params.kind), std::move(desc), ProfileView::Exposure,
                   [params, shape = std::move(shape), targets = std::move(targets)](const UtilityProfile& u) {
                     return penalized_objective(u, targets, params, shape);
                   });
}

Objective make_group_welfare_objective(const ProblemInstance& inst, const WelfareParams& params) {
  params.validate();
  if (!inst.groups) throw Error(ErrorCode::MissingGroups, "instance has no groups");
  std::vector<std::pair<std::string, double>> desc{
      {"lambda", params.lambda}, {"alpha1", params.alpha1}, {"alpha2", params.alpha2}, {"eta", params.eta}};
  return Objective("group-welfare", std::move(desc), ProfileView::Native,
                   [params, inst](const UtilityProfile& u) { return group_welfare(u, inst, params); });
}

}  // namespace fairrank
