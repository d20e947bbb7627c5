#include "fairrank/utility.hpp"

#include <numeric>

namespace fairrank {

std::size_t profile_size(const ProblemInstance& inst, ProfileView view) noexcept {
  if (inst.mode == Mode::Reciprocal && view == ProfileView::Native) return inst.n_users();
  return inst.n_users() + inst.n_items();
}

std::size_t profile_split(const ProblemInstance& inst, ProfileView) noexcept {
  return inst.n_users();
}

void accumulate_utilities(const DeterministicRanking& ranking, const ProblemInstance& inst,
                          ProfileView view, double weight, std::span<double> out) {
  const auto& v = inst.exposure_weights;
  const std::size_t n_users = inst.n_users();
  const std::size_t depth = std::min(ranking.slots(), v.size());
  const bool merged = inst.mode == Mode::Reciprocal && view == ProfileView::Native;
  const bool raw_exposure = view == ProfileView::Exposure || inst.mode == Mode::OneSided;

  for (std::size_t i = 0; i < n_users; ++i) {
    auto list = ranking.user(i);
    auto mu_row = inst.mu_user.row(i);
    for (std::size_t k = 0; k < depth; ++k) {
      const std::size_t j = list[k];
      const double wv = weight * v[k];
      out[i] += mu_row[j] * wv;
      if (merged) {
        out[j] += inst.mu_user(j, i) * wv;
      } else if (raw_exposure) {
        out[n_users + j] += wv;
      } else {
        out[n_users + j] += (*inst.mu_item)(j, i) * wv;
      }
    }
  }
}

UtilityProfile utility_profile(const DeterministicRanking& ranking, const ProblemInstance& inst,
                               ProfileView view) {
  if (ranking.n_users() != inst.n_users()) {
    throw Error(ErrorCode::DimensionMismatch, "ranking and instance disagree on n_users");
  }
  UtilityProfile u;
  u.values.assign(profile_size(inst, view), 0.0);
  u.side_split = profile_split(inst, view);
  accumulate_utilities(ranking, inst, view, 1.0, u.values);
  return u;
}

UtilityProfile utility_profile(const StochasticRanking& ranking, const ProblemInstance& inst,
                               ProfileView view) {
  if (ranking.n_users() != inst.n_users()) {
    throw Error(ErrorCode::DimensionMismatch, "ranking covers " + std::to_string(ranking.n_users()) +
                                                  " users, instance has " +
                                                  std::to_string(inst.n_users()));
  }
  for (const Atom& a : ranking.atoms()) {
    for (std::uint32_t j : a.ranking.items()) {
      if (j >= inst.n_items()) throw Error(ErrorCode::DimensionMismatch, "item index out of range");
    }
  }
  if (inst.mode == Mode::TwoSidedPrefs && !inst.mu_item) {
    throw Error(ErrorCode::MissingItemPreferences, "two-sided-prefs instance without mu_item");
  }
  UtilityProfile u;
  u.values.assign(profile_size(inst, view), 0.0);
  u.side_split = profile_split(inst, view);
  for (const Atom& a : ranking.atoms()) accumulate_utilities(a.ranking, inst, view, a.weight, u.values);
  return u;
}

std::vector<double> item_qualities(const ProblemInstance& inst) {
  std::vector<double> q(inst.n_items(), 0.0);
  for (std::size_t i = 0; i < inst.n_users(); ++i) {
    auto row = inst.mu_user.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) q[j] += row[j];
  }
  return q;
}

ExposureTargets exposure_targets(const ProblemInstance& inst, TargetKind kind) {
  ExposureTargets out;
  out.qualities = item_qualities(inst);
  out.total_quality = std::accumulate(out.qualities.begin(), out.qualities.end(), 0.0);
  const double v_norm =
      std::accumulate(inst.exposure_weights.begin(), inst.exposure_weights.end(), 0.0);
  out.total_exposure = static_cast<double>(inst.n_users()) * v_norm;

  const std::size_t n_items = inst.n_items();
  out.targets.assign(n_items, 0.0);
  if (kind == TargetKind::Equal) {
    for (double& t : out.targets) t = out.total_exposure / static_cast<double>(n_items);
  } else {
    if (!(out.total_quality > 0.0)) {
      throw Error(ErrorCode::ZeroTotalQuality, "quality-weighted targets need positive total quality");
    }
    for (std::size_t j = 0; j < n_items; ++j) {
      out.targets[j] = out.qualities[j] * out.total_exposure / out.total_quality;
    }
  }
  return out;
}

}  // namespace fairrank
