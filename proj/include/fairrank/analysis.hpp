#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fairrank/core.hpp"
#include "fairrank/objectives.hpp"
#include "fairrank/solver.hpp"

namespace fairrank {

/// Ascending sort followed by partial sums. Throws NegativeUtility.
std::vector<double> lorenz_curve(std::span<const double> u);

enum class Dominance {
  StrictLorenz,  ///< first curve >= second everywhere, > somewhere
  Dominated,     ///< second curve strictly dominates the first
  Equal,
  Incomparable,
};

const char* to_string(Dominance d) noexcept;

inline constexpr double kDominanceTol = 1e-9;

/// Generalized Lorenz comparison of u against u_prime.
Dominance dominance(std::span<const double> u, std::span<const double> u_prime,
                    double tol = kDominanceTol);

/// Same comparison on the raw components, without sorting.
Dominance pareto_dominance(std::span<const double> u, std::span<const double> u_prime,
                           double tol = kDominanceTol);

inline bool weakly_dominates(Dominance d) noexcept {
  return d == Dominance::StrictLorenz || d == Dominance::Equal;
}

/// sum_{j,j'} |u_j - u_j'| / (2 n sum u). Throws ZeroTotal.
double gini(std::span<const double> u);

/// Population standard deviation.
double std_dev(std::span<const double> u);

enum class Ordering { Less, Equal, Greater };

const char* to_string(Ordering o) noexcept;

/// Lexicographic comparison of ascending-sorted vectors, 1e-9 per position.
Ordering leximin_compare(std::span<const double> u, std::span<const double> u_prime,
                         double tol = kDominanceTol);

/// Cumulative utility of the ceil(f n) worst-off components.
double quantile_cumulative(std::span<const double> curve, double fraction);

struct LorenzReport {
  std::vector<double> curve;
  double gini = 0.0;
  double std_dev = 0.0;
  double total = 0.0;
  /// (fraction, cumulative utility) at 10%, 25%, 50% and 100%.
  std::vector<std::pair<double, double>> quantile_cums;
};

/// Gini is reported as 0 when the total is 0.
LorenzReport lorenz_report(std::span<const double> u);

struct RegretReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double bound_b = 0.0;
  double estimation_error = 0.0;
  bool holds = false;
};

/// Compares the true welfare of the ranking inferred on mu_hat with the
/// ranking inferred on the true preferences, against the bound
/// 4 B sqrt(n |v|^2) |mu_hat - mu|_F with n = |users| + |items|, plus the two
/// final duality gaps as slack. theta = (1/2, alpha, alpha); alpha > 1 throws
/// UnsupportedTheta. Only non-reciprocal instances are supported.
RegretReport regret_bound_check(const ProblemInstance& inst, const Matrix& mu_hat, double alpha,
                                const SolverConfig& config = {}, double eta = 1e-4);

}  // namespace fairrank
