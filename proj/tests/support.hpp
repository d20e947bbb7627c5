#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "fairrank/core.hpp"

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline fairrank::ProblemInstance one_sided(std::size_t users, std::size_t items, std::vector<double> mu,
                                           std::vector<double> v) {
  fairrank::ProblemInstance inst;
  inst.mode = fairrank::Mode::OneSided;
  inst.mu_user = fairrank::Matrix(users, items, std::move(mu));
  inst.exposure_weights = std::move(v);
  return inst;
}

// Random deterministic top-K ranking; reciprocal mode skips the user itself.
inline fairrank::DeterministicRanking random_ranking(std::mt19937_64& rng, std::size_t users, std::size_t items,
                                                    std::size_t slots, bool reciprocal) {
  fairrank::DeterministicRanking r(users, slots);
  for (std::size_t i = 0; i < users; ++i) {
    std::vector<std::uint32_t> pool;
    for (std::uint32_t j = 0; j < items; ++j) {
      if (!(reciprocal && j == i)) pool.push_back(j);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t k = 0; k < slots; ++k) r.user(i)[k] = pool[k];
  }
  return r;
}

// Dense P_ijk built directly from the atoms, indexed [i][j][k].
inline std::vector<std::vector<std::vector<double>>> dense_tensor(const fairrank::StochasticRanking& p,
                                                                  std::size_t items) {
  std::vector<std::vector<std::vector<double>>> t(
      p.n_users(), std::vector<std::vector<double>>(items, std::vector<double>(p.slots(), 0.0)));
  for (const auto& a : p.atoms()) {
    for (std::size_t i = 0; i < p.n_users(); ++i) {
      for (std::size_t k = 0; k < p.slots(); ++k) t[i][a.ranking.user(i)[k]][k] += a.weight;
    }
  }
  return t;
}

}  // namespace testing
