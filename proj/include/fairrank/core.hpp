#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairrank {

enum class ErrorCode {
  // instance validation
  InvalidDimensions,
  NegativePreference,
  NonMonotoneWeights,
  AsymmetricReciprocal,
  InvalidGroups,
  MissingItemPreferences,
  // evaluation
  IndexOutOfRange,
  DimensionMismatch,
  InvalidRanking,
  ZeroTotalQuality,
  NonPositiveArgument,
  WrongModeForKind,
  ZeroQuality,
  MissingGroups,
  InvalidParameter,
  NonFiniteGradient,
  ObjectiveEvaluationFailure,
  // analysis
  NegativeUtility,
  LengthMismatch,
  ZeroTotal,
  UnsupportedTheta,
  // i/o and front end
  ParseError,
  IOError,
  UnknownFamily,
  BadParam,
  IncompatibleInstances,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

enum class Mode { OneSided, TwoSidedPrefs, Reciprocal };

const char* to_string(Mode mode) noexcept;
Mode parse_mode(const std::string& name);

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

  const std::vector<double>& values() const noexcept { return values_; }

  Matrix transposed() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Optional (possibly overlapping) groups of users and items, 0-based.
struct Groups {
  std::vector<std::vector<std::size_t>> users;
  std::vector<std::vector<std::size_t>> items;

  bool operator==(const Groups&) const = default;
};

/// A recommendation task: preferences, positional exposure weights, and the
/// side structure.
///
/// mu_user(i, j) is the value of item j to user i. In TwoSidedPrefs mode
/// mu_item(j, i) is the value of user i to item j; in OneSided mode that
/// value is 1, and in Reciprocal mode users and items are the same
/// population and mu_user is symmetric.
///
/// A single exposure-weight vector is shared by all users; the number of
/// recommendation slots K is its length.
struct ProblemInstance {
  Mode mode = Mode::OneSided;
  Matrix mu_user;
  std::optional<Matrix> mu_item;
  std::vector<double> exposure_weights;
  std::optional<Groups> groups;

  std::size_t n_users() const noexcept { return mu_user.rows(); }
  std::size_t n_items() const noexcept { return mu_user.cols(); }
  std::size_t slots() const noexcept { return exposure_weights.size(); }

  /// Value of `user` to `item` (the item-side preference weight).
  double item_preference(std::size_t item, std::size_t user) const;

  /// Number of individuals whose utility is tracked: users plus items, or
  /// just users in reciprocal mode.
  std::size_t population() const noexcept;

  /// Items that can be shown to `user`. Reciprocal mode excludes the user.
  std::size_t candidate_count() const noexcept;

  bool operator==(const ProblemInstance&) const = default;
};

/// Returns nullopt when every instance invariant holds, else the first
/// violation.
std::optional<Error> validate_instance(const ProblemInstance& inst);

/// Throws the first violated invariant.
void ensure_valid(const ProblemInstance& inst);

/// One top-K ranking per user, stored as a flat users x slots table of
/// 0-based item indices (rank 1 first).
class DeterministicRanking {
 public:
  DeterministicRanking() = default;
  DeterministicRanking(std::size_t n_users, std::size_t slots);
  DeterministicRanking(std::size_t n_users, std::size_t slots, std::vector<std::uint32_t> items);

  std::size_t n_users() const noexcept { return n_users_; }
  std::size_t slots() const noexcept { return slots_; }

  std::span<const std::uint32_t> user(std::size_t i) const {
    return {items_.data() + i * slots_, slots_};
  }
  std::span<std::uint32_t> user(std::size_t i) { return {items_.data() + i * slots_, slots_}; }

  const std::vector<std::uint32_t>& items() const noexcept { return items_; }

  std::size_t hash() const noexcept;

  bool operator==(const DeterministicRanking&) const = default;

 private:
  std::size_t n_users_ = 0;
  std::size_t slots_ = 0;
  std::vector<std::uint32_t> items_;
};

struct Atom {
  double weight = 0.0;
  DeterministicRanking ranking;
};

/// A convex combination of deterministic rankings. The ranking tensor
/// P_ijk is never materialized; marginals are computed from the atoms.
class StochasticRanking {
 public:
  StochasticRanking() = default;
  explicit StochasticRanking(DeterministicRanking ranking);
  /// Throws InvalidRanking unless weights are in (0, 1], sum to 1 within
  /// 1e-9, and all atoms share their shape.
  explicit StochasticRanking(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t n_users() const noexcept;
  std::size_t slots() const noexcept;

  /// Coalesces atoms with identical rankings, keeping first-seen order.
  StochasticRanking merged() const;

  /// Builds a joint ranking from independent per-user distributions by
  /// aligning each user's cumulative weights on [0, 1]. The result has at
  /// most sum(per-user atoms) atoms and exactly the given per-user marginals.
  /// per_user[i] is a list of (weight, top-K list) for user i.
  static StochasticRanking from_per_user(
      const std::vector<std::vector<std::pair<double, std::vector<std::uint32_t>>>>& per_user);

 private:
  std::vector<Atom> atoms_;
};

/// Checks shape and item ranges of a ranking against an instance
/// (InvalidRanking / DimensionMismatch).
void validate_ranking(const StochasticRanking& ranking, const ProblemInstance& inst);

/// Expected exposure P_ij . v of item j to user i.
double marginal_exposure(const StochasticRanking& ranking, std::span<const double> weights,
                         std::size_t user, std::size_t item);

/// Marginal probabilities P_ijk for one user as an n_items x slots matrix.
Matrix rank_marginals(const StochasticRanking& ranking, std::size_t user, std::size_t n_items);

/// Utilities of users followed by items; reciprocal profiles have no item
/// block (side_split == values.size()).
struct UtilityProfile {
  std::vector<double> values;
  std::size_t side_split = 0;

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> users() const { return {values.data(), side_split}; }
  std::span<const double> items() const {
    return {values.data() + side_split, values.size() - side_split};
  }
  bool single_population() const noexcept { return side_split == values.size(); }
};

}  // namespace fairrank
