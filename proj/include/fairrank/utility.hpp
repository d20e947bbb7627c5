#pragma once

#include <span>
#include <vector>

#include "fairrank/core.hpp"

namespace fairrank {

/// Which linear utility map an objective is defined on.
///
/// Native: user-side utilities then item-side utilities (exposure in
/// one-sided mode, mu_ji-weighted exposure with two-sided preferences), or
/// the two-sided utility of every user in reciprocal mode.
///
/// Exposure: user-side utilities then raw item exposures e_j = sum_i P_ij.v,
/// in every mode. In reciprocal mode this treats a user as consumer and as
/// recommended item separately, which is what the exposure-parity baselines
/// penalize.
enum class ProfileView { Native, Exposure };

std::size_t profile_size(const ProblemInstance& inst, ProfileView view) noexcept;
std::size_t profile_split(const ProblemInstance& inst, ProfileView view) noexcept;

/// Adds weight * u(ranking) into `out` (sized profile_size()).
void accumulate_utilities(const DeterministicRanking& ranking, const ProblemInstance& inst,
                          ProfileView view, double weight, std::span<double> out);

UtilityProfile utility_profile(const DeterministicRanking& ranking, const ProblemInstance& inst,
                               ProfileView view = ProfileView::Native);

/// Utility profile of a stochastic ranking. Throws DimensionMismatch when
/// the ranking and instance disagree on shape.
UtilityProfile utility_profile(const StochasticRanking& ranking, const ProblemInstance& inst,
                               ProfileView view = ProfileView::Native);

enum class TargetKind { Equal, QualityWeighted };

struct ExposureTargets {
  std::vector<double> targets;
  double total_exposure = 0.0;
  double total_quality = 0.0;
  std::vector<double> qualities;
};

/// q_j = sum_i mu_ij.
std::vector<double> item_qualities(const ProblemInstance& inst);

/// Equal: E / n_items per item; QualityWeighted: q_j E / Q, where
/// E = n_users * |v|_1. Throws ZeroTotalQuality for QualityWeighted with Q = 0.
ExposureTargets exposure_targets(const ProblemInstance& inst, TargetKind kind);

}  // namespace fairrank
