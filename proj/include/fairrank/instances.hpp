#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairrank/core.hpp"

namespace fairrank {

/// One closed-form solution attached to a generated instance.
struct ReferenceCase {
  std::string name;
  /// Where the values apply, e.g. "welfare, every theta" or "beta -> inf".
  std::string regime;
  /// Closed-form ranking, when the construction gives one.
  std::optional<StochasticRanking> ranking;
  /// Native utility profile of `ranking` (or of the limit), possibly empty.
  std::vector<double> profile;
  /// Sum of user utilities (two-sided utilities in reciprocal mode).
  double total_user_utility = 0.0;
};

struct ReferenceSolution {
  std::string description;
  std::vector<ReferenceCase> cases;

  /// Throws BadParam for an unknown name.
  const ReferenceCase& at(const std::string& name) const;
};

struct GeneratedInstance {
  ProblemInstance instance;
  ReferenceSolution reference;
};

/// Quality-weighted counterexample: N blocks of d+1 users over d+1 items,
/// one slot. Cases "welfare" and "qua-limit".
GeneratedInstance gen_qw_counterexample(std::size_t d, std::size_t n_blocks);

/// p in the quality-weighted limit of gen_qw_counterexample.
double qw_limit_p(std::size_t d);

/// Reciprocal leader/star with n users, one slot. Cases "welfare",
/// "expo-limit" and "qua-limit".
GeneratedInstance gen_leader_star(std::size_t n);

/// Reciprocal pair/triangle with n >= 5 users, one slot. Cases "welfare" and
/// "eq-util-limit".
GeneratedInstance gen_pair_triangle(std::size_t n);

/// Per-ranking constraint example: N blocks of d+1 users over d+1 items, one
/// slot. Cases "global", "per-ranking-expo" and "per-ranking-qua".
GeneratedInstance gen_micro_example(std::size_t d, std::size_t n_blocks);

/// mu i.i.d. uniform on [0, 1) (symmetric with zero diagonal in reciprocal
/// mode), v_k = 1 / log2(1 + k). Deterministic in `seed`.
ProblemInstance gen_random(std::size_t n_users, std::size_t n_items, Mode mode, std::size_t slots,
                           std::uint64_t seed);

/// DCG weights 1 / log2(1 + k), k = 1..K.
std::vector<double> dcg_weights(std::size_t slots);

/// .fri text: one JSON header line, then mu_user rows and, for
/// two-sided-prefs, mu_item rows, as comma-separated values.
void write_instance(std::ostream& os, const ProblemInstance& inst);
ProblemInstance read_instance(std::istream& is);

/// Throws IOError / ParseError (with line and column).
ProblemInstance load_instance(const std::filesystem::path& path);
void save_instance(const ProblemInstance& inst, const std::filesystem::path& path);

}  // namespace fairrank
