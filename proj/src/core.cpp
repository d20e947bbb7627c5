#include "fairrank/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace fairrank {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimensions: return "InvalidDimensions";
    case ErrorCode::NegativePreference: return "NegativePreference";
    case ErrorCode::NonMonotoneWeights: return "NonMonotoneWeights";
    case ErrorCode::AsymmetricReciprocal: return "AsymmetricReciprocal";
    case ErrorCode::InvalidGroups: return "InvalidGroups";
    case ErrorCode::MissingItemPreferences: return "MissingItemPreferences";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidRanking: return "InvalidRanking";
    case ErrorCode::ZeroTotalQuality: return "ZeroTotalQuality";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::WrongModeForKind: return "WrongModeForKind";
    case ErrorCode::ZeroQuality: return "ZeroQuality";
    case ErrorCode::MissingGroups: return "MissingGroups";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::ObjectiveEvaluationFailure: return "ObjectiveEvaluationFailure";
    case ErrorCode::NegativeUtility: return "NegativeUtility";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::UnsupportedTheta: return "UnsupportedTheta";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IOError: return "IOError";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::BadParam: return "BadParam";
    case ErrorCode::IncompatibleInstances: return "IncompatibleInstances";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

const char* to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::OneSided: return "one-sided";
    case Mode::TwoSidedPrefs: return "two-sided-prefs";
    case Mode::Reciprocal: return "reciprocal";
  }
  return "unknown";
}

Mode parse_mode(const std::string& name) {
  if (name == "one-sided") return Mode::OneSided;
  if (name == "two-sided-prefs") return Mode::TwoSidedPrefs;
  if (name == "reciprocal") return Mode::Reciprocal;
  throw Error(ErrorCode::BadParam, "unknown mode '" + name + "'");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw Error(ErrorCode::InvalidDimensions, "matrix storage does not match its shape");
  }
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

double ProblemInstance::item_preference(std::size_t item, std::size_t user) const {
  switch (mode) {
    case Mode::OneSided: return 1.0;
    case Mode::TwoSidedPrefs: return (*mu_item)(item, user);
    case Mode::Reciprocal: return mu_user(item, user);
  }
  return 1.0;
}

std::size_t ProblemInstance::population() const noexcept {
  return mode == Mode::Reciprocal ? n_users() : n_users() + n_items();
}

std::size_t ProblemInstance::candidate_count() const noexcept {
  return mode == Mode::Reciprocal ? n_items() - 1 : n_items();
}

namespace {

std::optional<Error> check_groups(const std::vector<std::vector<std::size_t>>& groups,
                                  std::size_t range, const char* side) {
  if (groups.empty()) return std::nullopt;
  std::vector<bool> covered(range, false);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) {
      return Error(ErrorCode::InvalidGroups,
                   std::string(side) + " group " + std::to_string(g + 1) + " is empty");
    }
    for (std::size_t member : groups[g]) {
      if (member >= range) {
        return Error(ErrorCode::InvalidGroups, std::string(side) + " group " +
                                                   std::to_string(g + 1) +
                                                   " has an out-of-range member");
      }
      covered[member] = true;
    }
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    return Error(ErrorCode::InvalidGroups, std::string(side) + " groups do not cover every index");
  }
  return std::nullopt;
}

}  // namespace

std::optional<Error> validate_instance(const ProblemInstance& inst) {
  const std::size_t n_users = inst.n_users();
  const std::size_t n_items = inst.n_items();
  if (n_users == 0 || n_items == 0) {
    return Error(ErrorCode::InvalidDimensions, "instance needs at least one user and one item");
  }
  if (inst.exposure_weights.empty() || inst.slots() > n_items) {
    return Error(ErrorCode::InvalidDimensions,
                 "number of slots must be between 1 and n_items (" + std::to_string(n_items) + ")");
  }
  if (inst.mode == Mode::TwoSidedPrefs) {
    if (!inst.mu_item) {
      return Error(ErrorCode::MissingItemPreferences, "two-sided-prefs instance without mu_item");
    }
    if (inst.mu_item->rows() != n_items || inst.mu_item->cols() != n_users) {
      return Error(ErrorCode::InvalidDimensions, "mu_item must be n_items x n_users");
    }
  } else if (inst.mu_item) {
    return Error(ErrorCode::InvalidDimensions, "mu_item is only allowed in two-sided-prefs mode");
  }
  if (inst.mode == Mode::Reciprocal) {
    if (n_users != n_items) {
      return Error(ErrorCode::InvalidDimensions, "reciprocal instance must be square");
    }
    if (inst.slots() > n_items - 1 || n_items < 2) {
      return Error(ErrorCode::InvalidDimensions,
                   "reciprocal instance needs slots <= n_users - 1 (no self-recommendation)");
    }
  }

  auto check_entries = [](const Matrix& m, const char* name) -> std::optional<Error> {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const double x = m(r, c);
        if (!std::isfinite(x) || x < 0.0) {
          std::ostringstream os;
          os << name << "(" << r + 1 << "," << c + 1 << ") = " << x << " is not a finite value >= 0";
          return Error(ErrorCode::NegativePreference, os.str());
        }
      }
    }
    return std::nullopt;
  };
  if (auto err = check_entries(inst.mu_user, "mu_user")) return err;
  if (inst.mu_item) {
    if (auto err = check_entries(*inst.mu_item, "mu_item")) return err;
  }

  const auto& v = inst.exposure_weights;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k]) || v[k] < 0.0) {
      return Error(ErrorCode::NonMonotoneWeights,
                   "exposure weight " + std::to_string(k + 1) + " is negative or not finite");
    }
    if (k + 1 < v.size() && v[k] < v[k + 1]) {
      return Error(ErrorCode::NonMonotoneWeights, "exposure weights increase at rank " +
                                                      std::to_string(k + 1));
    }
  }

  if (inst.mode == Mode::Reciprocal) {
    for (std::size_t i = 0; i < n_users; ++i) {
      for (std::size_t j = i + 1; j < n_users; ++j) {
        if (inst.mu_user(i, j) != inst.mu_user(j, i)) {
          return Error(ErrorCode::AsymmetricReciprocal,
                       "mu(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") != mu(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
        }
      }
    }
  }

  if (inst.groups) {
    if (inst.groups->users.empty() && inst.groups->items.empty()) {
      return Error(ErrorCode::InvalidGroups, "groups present but both lists are empty");
    }
    if (auto err = check_groups(inst.groups->users, n_users, "user")) return err;
    if (inst.mode == Mode::Reciprocal && !inst.groups->items.empty()) {
      return Error(ErrorCode::InvalidGroups, "reciprocal instances take user groups only");
    }
    if (auto err = check_groups(inst.groups->items, n_items, "item")) return err;
  }
  return std::nullopt;
}

void ensure_valid(const ProblemInstance& inst) {
  if (auto err = validate_instance(inst)) throw *err;
}

DeterministicRanking::DeterministicRanking(std::size_t n_users, std::size_t slots)
    : n_users_(n_users), slots_(slots), items_(n_users * slots, 0) {}

DeterministicRanking::DeterministicRanking(std::size_t n_users, std::size_t slots,
                                           std::vector<std::uint32_t> items)
    : n_users_(n_users), slots_(slots), items_(std::move(items)) {
  if (items_.size() != n_users * slots) {
    throw Error(ErrorCode::InvalidRanking, "ranking table does not have n_users x slots entries");
  }
}

std::size_t DeterministicRanking::hash() const noexcept {
  // FNV-1a over the item table.
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t x : items_) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

StochasticRanking::StochasticRanking(DeterministicRanking ranking) {
  atoms_.push_back({1.0, std::move(ranking)});
}

StochasticRanking::StochasticRanking(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorCode::InvalidRanking, "stochastic ranking has no atoms");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.weight > 0.0) || a.weight > 1.0 + 1e-12) {
      throw Error(ErrorCode::InvalidRanking, "atom weight outside (0, 1]");
    }
    if (a.ranking.n_users() != atoms_.front().ranking.n_users() ||
        a.ranking.slots() != atoms_.front().ranking.slots()) {
      throw Error(ErrorCode::InvalidRanking, "atoms have different shapes");
    }
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidRanking, "atom weights sum to " + std::to_string(total));
  }
}

std::size_t StochasticRanking::n_users() const noexcept {
  return atoms_.empty() ? 0 : atoms_.front().ranking.n_users();
}

std::size_t StochasticRanking::slots() const noexcept {
  return atoms_.empty() ? 0 : atoms_.front().ranking.slots();
}

StochasticRanking StochasticRanking::merged() const {
  std::vector<Atom> out;
  std::unordered_map<std::size_t, std::vector<std::size_t>> seen;
  for (const Atom& a : atoms_) {
    auto& bucket = seen[a.ranking.hash()];
    bool found = false;
    for (std::size_t idx : bucket) {
      if (out[idx].ranking == a.ranking) {
        out[idx].weight += a.weight;
        found = true;
        break;
      }
    }
    if (!found) {
      bucket.push_back(out.size());
      out.push_back(a);
    }
  }
  StochasticRanking result;
  result.atoms_ = std::move(out);
  return result;
}

StochasticRanking StochasticRanking::from_per_user(
    const std::vector<std::vector<std::pair<double, std::vector<std::uint32_t>>>>& per_user) {
  if (per_user.empty()) throw Error(ErrorCode::InvalidRanking, "no users");
  const std::size_t slots = per_user.front().empty() ? 0 : per_user.front().front().second.size();

  // Cumulative breakpoints of every user on [0, 1].
  std::vector<std::vector<double>> cum(per_user.size());
  std::vector<double> cuts{0.0, 1.0};
  for (std::size_t i = 0; i < per_user.size(); ++i) {
    if (per_user[i].empty()) throw Error(ErrorCode::InvalidRanking, "user without atoms");
    double acc = 0.0;
    for (const auto& [w, list] : per_user[i]) {
      if (!(w > 0.0) || list.size() != slots) {
        throw Error(ErrorCode::InvalidRanking, "bad per-user atom for user " + std::to_string(i + 1));
      }
      acc += w;
      cum[i].push_back(acc);
    }
    if (std::abs(acc - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidRanking,
                  "weights of user " + std::to_string(i + 1) + " do not sum to 1");
    }
    cum[i].back() = 1.0;
    cuts.insert(cuts.end(), cum[i].begin(), cum[i].end() - 1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Atom> atoms;
  std::vector<std::size_t> cursor(per_user.size(), 0);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c];
    const double hi = cuts[c + 1];
    if (!(hi > lo)) continue;
    DeterministicRanking r(per_user.size(), slots);
    for (std::size_t i = 0; i < per_user.size(); ++i) {
      while (cursor[i] + 1 < cum[i].size() && cum[i][cursor[i]] <= lo) ++cursor[i];
      const auto& list = per_user[i][cursor[i]].second;
      std::copy(list.begin(), list.end(), r.user(i).begin());
    }
    atoms.push_back({hi - lo, std::move(r)});
  }
  return StochasticRanking(std::move(atoms)).merged();
}

void validate_ranking(const StochasticRanking& ranking, const ProblemInstance& inst) {
  if (ranking.n_users() != inst.n_users()) {
    throw Error(ErrorCode::DimensionMismatch, "ranking covers " + std::to_string(ranking.n_users()) +
                                                  " users, instance has " +
                                                  std::to_string(inst.n_users()));
  }
  if (ranking.slots() > inst.n_items()) {
    throw Error(ErrorCode::DimensionMismatch, "ranking has more slots than items");
  }
  std::vector<char> used(inst.n_items(), 0);
  for (const Atom& a : ranking.atoms()) {
    for (std::size_t i = 0; i < a.ranking.n_users(); ++i) {
      auto list = a.ranking.user(i);
      for (std::uint32_t j : list) {
        if (j >= inst.n_items()) throw Error(ErrorCode::InvalidRanking, "item index out of range");
        if (used[j]) throw Error(ErrorCode::InvalidRanking, "item repeated in a ranking");
        if (inst.mode == Mode::Reciprocal && j == i) {
          throw Error(ErrorCode::InvalidRanking, "reciprocal ranking recommends a user to themself");
        }
        used[j] = 1;
      }
      for (std::uint32_t j : list) used[j] = 0;
    }
  }
}

double marginal_exposure(const StochasticRanking& ranking, std::span<const double> weights,
                         std::size_t user, std::size_t item) {
  if (user >= ranking.n_users()) {
    throw Error(ErrorCode::IndexOutOfRange, "user " + std::to_string(user) + " out of range");
  }
  double total = 0.0;
  for (const Atom& a : ranking.atoms()) {
    auto list = a.ranking.user(user);
    for (std::size_t k = 0; k < list.size() && k < weights.size(); ++k) {
      if (list[k] == item) {
        total += a.weight * weights[k];
        break;
      }
    }
  }
  return total;
}

Matrix rank_marginals(const StochasticRanking& ranking, std::size_t user, std::size_t n_items) {
  if (user >= ranking.n_users()) {
    throw Error(ErrorCode::IndexOutOfRange, "user " + std::to_string(user) + " out of range");
  }
  Matrix m(n_items, ranking.slots());
  for (const Atom& a : ranking.atoms()) {
    auto list = a.ranking.user(user);
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k] >= n_items) throw Error(ErrorCode::IndexOutOfRange, "item out of range");
      m(list[k], k) += a.weight;
    }
  }
  return m;
}

}  // namespace fairrank
