#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "fairrank/core.hpp"
#include "fairrank/objectives.hpp"
#include "fairrank/utility.hpp"

namespace fairrank {

struct SolverConfig {
  std::size_t iterations = 5000;
  /// Number of slots K; defaults to the length of v. Must not exceed it.
  std::optional<std::size_t> slots;
  /// Stop once the duality gap falls to this value. Off by default.
  std::optional<double> gap_tolerance;
  /// Record every trace_every-th iteration (plus the last one).
  std::size_t trace_every = 1;
  /// Worker threads for the per-user oracle. Results do not depend on it.
  std::size_t threads = 1;

  void validate() const;
};

struct TraceRow {
  std::size_t iter = 0;
  /// F(u(P^(t-1))), the objective before the step of iteration t.
  double objective = 0.0;
  /// <P~ - P^(t-1), grad F>.
  double gap = 0.0;
  double gamma = 0.0;
  double elapsed_ms = 0.0;
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  /// Objective and gap evaluated at the returned ranking P^(T).
  double final_objective = 0.0;
  double final_gap = 0.0;
  std::size_t iterations_run = 0;
  /// Curvature constant of the objective at u + eta, when available.
  std::optional<double> curvature_bound;
  /// Upper bound on |u|^2 over the ranking polytope.
  double utility_norm_bound = 0.0;
};

struct SolveResult {
  StochasticRanking ranking;
  /// Native utility profile of `ranking`, recomputed from its atoms.
  UtilityProfile utilities;
  SolverTrace trace;
};

/// Per user, items sorted by mu_ij + mu_ji (ties by ascending index),
/// truncated to K slots. Reciprocal mode skips the user itself.
DeterministicRanking utilitarian_ranking(const ProblemInstance& inst, std::size_t slots);
DeterministicRanking utilitarian_ranking(const ProblemInstance& inst);

/// Vertex of the ranking polytope maximizing <P, grad F>: per user, the K
/// items with the largest scores grad_i mu_ij + grad_item(j) w_ji, ties by
/// ascending item index. `grad` is laid out according to `view`.
/// Throws NonFiniteGradient.
DeterministicRanking linear_oracle(const ProblemInstance& inst, ProfileView view,
                                   std::span<const double> grad, std::size_t slots,
                                   std::size_t threads = 1);

/// Upper bound on |u|^2 from per-component maxima of the profile.
double utility_norm_bound(const ProblemInstance& inst, ProfileView view, std::size_t slots);

/// Frank-Wolfe with step 2/(t+2) from the utilitarian ranking.
SolveResult solve(const ProblemInstance& inst, const Objective& objective,
                  const SolverConfig& config = {});

/// Columns iter,objective,gap,gamma,elapsed_ms. With `timing` false the
/// elapsed column is written as 0 so that repeated runs compare equal.
void write_trace_csv(std::ostream& os, const SolverTrace& trace, bool timing = true);

}  // namespace fairrank
