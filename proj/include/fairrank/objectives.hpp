#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fairrank/core.hpp"
#include "fairrank/utility.hpp"

namespace fairrank {

/// Scale-invariant concave transform: x^a (a > 0), log x (a = 0), -x^a (a < 0).
/// Throws NonPositiveArgument for x <= 0 when a <= 0.
double psi(double x, double alpha);

/// d psi / dx, always positive on its domain. Throws NonPositiveArgument for
/// x <= 0 unless alpha >= 1 (where the derivative stays finite at 0).
double psi_prime(double x, double alpha);

/// |d^2 psi / dx^2|, used for curvature bounds.
double psi_curvature(double x, double alpha);

/// Welfare parameters theta = (lambda, alpha1, alpha2) with the smoothing
/// offset eta added to every utility before psi.
struct WelfareParams {
  double lambda = 0.5;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eta = 1e-4;

  /// theta in Theta: 0 < lambda < 1 and both alphas < 1.
  bool strictly_concave() const noexcept;
  /// Throws InvalidParameter for lambda outside [0, 1], alpha > 1, eta < 0.
  void validate() const;
};

enum class PenaltyKind { QualityWeighted, EqualExposure, EqualUtility };

const char* to_string(PenaltyKind kind) noexcept;

struct PenaltyParams {
  double beta = 0.0;
  PenaltyKind kind = PenaltyKind::QualityWeighted;
  double sqrt_eps = 1e-12;
  /// Divide the squared deviations by the population size n.
  bool normalize_by_n = true;

  void validate() const;
};

struct Evaluation {
  double value = 0.0;
  std::vector<double> grad;
};

/// (1 - lambda) sum_users psi(u_i + eta, alpha1) + lambda sum_items psi(u_j + eta, alpha2).
/// Single-population profiles (reciprocal) use sum_i psi(u_i + eta, alpha1).
Evaluation welfare(const UtilityProfile& u, const WelfareParams& params);

/// sum_users u_i - beta * sqrt(D(u) [/ n] + sqrt_eps).
///
/// QualityWeighted / EqualExposure: D = sum_items (u_j - t_j)^2 over the item
/// block with the given per-item targets. EqualUtility: D = sum_i (u_i - mean)^2
/// over a single-population (reciprocal) profile; `targets` is ignored.
/// n is inst.population().
Evaluation penalized_objective(const UtilityProfile& u, std::span<const double> targets,
                               const PenaltyParams& params, const ProblemInstance& inst);

/// sum over ordered pairs of |u_j / q_j - u_j' / q_j'|. Throws ZeroQuality.
double pairwise_penalty(std::span<const double> u, std::span<const double> q);

/// Welfare over group sums. User groups get weight (1 - lambda) and alpha1,
/// item categories weight lambda and alpha2; a side without groups uses
/// singletons. Reciprocal profiles use user groups with weight 1.
/// Throws MissingGroups when the instance has none.
Evaluation group_welfare(const UtilityProfile& u, const ProblemInstance& inst,
                         const WelfareParams& params);

/// A concave function of a utility profile together with the profile view
/// it reads. Immutable; safe to share across threads.
class Objective {
 public:
  using Fn = std::function<Evaluation(const UtilityProfile&)>;

  Objective(std::string name, std::vector<std::pair<std::string, double>> params,
            ProfileView view, Fn fn, std::optional<double> curvature_bound = std::nullopt);

  Evaluation operator()(const UtilityProfile& u) const { return fn_(u); }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::pair<std::string, double>>& params() const noexcept { return params_; }
  ProfileView view() const noexcept { return view_; }
  /// max_i |Phi_i''| evaluated at u + eta, when the objective is separable
  /// and smooth; nullopt otherwise.
  std::optional<double> curvature_bound() const noexcept { return curvature_bound_; }

 private:
  std::string name_;
  std::vector<std::pair<std::string, double>> params_;
  ProfileView view_;
  Fn fn_;
  std::optional<double> curvature_bound_;
};

Objective make_welfare_objective(const ProblemInstance& inst, const WelfareParams& params);

/// EqualUtility requires a reciprocal instance (WrongModeForKind). The
/// exposure-based kinds read the Exposure view.
Objective make_penalized_objective(const ProblemInstance& inst, const PenaltyParams& params);

Objective make_group_welfare_objective(const ProblemInstance& inst, const WelfareParams& params);

}  // namespace fairrank
