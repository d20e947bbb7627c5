#include <doctest.h>

#include <numeric>
#include <random>

#include "fairrank/instances.hpp"
#include "fairrank/utility.hpp"
#include "support.hpp"

using namespace fairrank;

namespace {

// Utilities straight from the tensor formulas, independent of the library's
// per-atom accumulation.
std::vector<double> tensor_utilities(const StochasticRanking& p, const ProblemInstance& inst) {
  const auto t = testing::dense_tensor(p, inst.n_items());
  const auto& v = inst.exposure_weights;
  auto pv = [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.slots(); ++k) s += t[i][j][k] * v[k];
    return s;
  };
  const std::size_t n = inst.n_users(), m = inst.n_items();
  std::vector<double> u;
  if (inst.mode == Mode::Reciprocal) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += inst.mu_user(i, j) * (pv(i, j) + pv(j, i));
      u.push_back(s);
    }
    return u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += inst.mu_user(i, j) * pv(i, j);
    u.push_back(s);
  }
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = inst.mode == Mode::TwoSidedPrefs ? (*inst.mu_item)(j, i) : 1.0;
      s += w * pv(i, j);
    }
    u.push_back(s);
  }
  return u;
}

StochasticRanking random_stochastic(std::mt19937_64& rng, const ProblemInstance& inst, std::size_t slots) {
  std::vector<Atom> atoms;
  const std::size_t n = 1 + rng() % 4;
  std::vector<double> w(n);
  for (double& x : w) x = testing::uniform(rng, 0.1, 1.0);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    atoms.push_back({w[a] / total, testing::random_ranking(rng, inst.n_users(), inst.n_items(), slots,
                                                           inst.mode == Mode::Reciprocal)});
  }
  return StochasticRanking(std::move(atoms));
}

}  // namespace

TEST_SUITE("utility") {
  TEST_CASE("single slot one-sided example") {
    const ProblemInstance inst = testing::one_sided(1, 2, {1, 0.5}, {1});
    const UtilityProfile u = utility_profile(StochasticRanking(DeterministicRanking(1, 1, {0})), inst);
    REQUIRE(u.size() == 3);
    CHECK(u.side_split == 1);
    CHECK(u.values == std::vector<double>{1, 1, 0});
  }

  TEST_CASE("leader-star welfare ranking utilities") {
    const GeneratedInstance g = gen_leader_star(4);
    const ReferenceCase& c = g.reference.at("welfare");
    REQUIRE(c.ranking.has_value());
    const UtilityProfile u = utility_profile(*c.ranking, g.instance);
    REQUIRE(u.single_population());
    CHECK(u.values[0] == doctest::Approx(4.0).epsilon(1e-12));
    for (std::size_t i = 1; i < 4; ++i) CHECK(u.values[i] == doctest::Approx(1.0 + 1.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("reciprocal zero preferences give zero utilities") {
    ProblemInstance inst;
    inst.mode = Mode::Reciprocal;
    inst.mu_user = Matrix(3, 3, 0.0);
    inst.exposure_weights = {1.0};
    const UtilityProfile u = utility_profile(StochasticRanking(DeterministicRanking(3, 1, {1, 2, 0})), inst);
    CHECK(u.values == std::vector<double>{0, 0, 0});
  }

  TEST_CASE("dimension mismatch") {
    const ProblemInstance inst = testing::one_sided(2, 3, std::vector<double>(6, 1.0), {1});
    CHECK_THROWS_AS(utility_profile(StochasticRanking(DeterministicRanking(1, 1, {0})), inst), Error);
  }

  TEST_CASE("exposure targets") {
    const ProblemInstance two = testing::one_sided(2, 2, {1, 0, 0, 1}, {1});
    const ExposureTargets eq = exposure_targets(two, TargetKind::Equal);
    CHECK(eq.targets == std::vector<double>{1, 1});

    const GeneratedInstance qw = gen_qw_counterexample(2, 1);
    const ExposureTargets qt = exposure_targets(qw.instance, TargetKind::QualityWeighted);
    CHECK(qt.qualities == std::vector<double>{1, 1, 2});
    CHECK(qt.targets[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(qt.targets[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(qt.targets[2] == doctest::Approx(1.5).epsilon(1e-15));

    const GeneratedInstance star = gen_leader_star(4);
    const ExposureTargets st = exposure_targets(star.instance, TargetKind::QualityWeighted);
    CHECK(st.qualities[0] == 3.0);
    CHECK(st.targets[0] == doctest::Approx(2.0).epsilon(1e-15));
    for (std::size_t j = 1; j < 4; ++j) CHECK(st.targets[j] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    const ProblemInstance zero = testing::one_sided(2, 2, {0, 0, 0, 0}, {1});
    CHECK_THROWS_AS(exposure_targets(zero, TargetKind::QualityWeighted), Error);
  }

  TEST_CASE("property: utilities match the tensor formulas in every mode") {
    std::mt19937_64 rng(21);
    for (Mode mode : {Mode::OneSided, Mode::TwoSidedPrefs, Mode::Reciprocal}) {
      for (int trial = 0; trial < 10; ++trial) {
        const std::size_t users = 3 + rng() % 3;
        const std::size_t items = mode == Mode::Reciprocal ? users : 3 + rng() % 4;
        ProblemInstance inst = gen_random(users, items, mode, 2, 100 + trial);
        const StochasticRanking p = random_stochastic(rng, inst, 2);
        const UtilityProfile u = utility_profile(p, inst);
        const std::vector<double> expect = tensor_utilities(p, inst);
        REQUIRE(u.values.size() == expect.size());
        for (std::size_t k = 0; k < expect.size(); ++k) CHECK(u.values[k] == doctest::Approx(expect[k]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("property: utilities are linear in the atom weights") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
      const ProblemInstance inst = gen_random(4, 6, Mode::OneSided, 3, 200 + trial);
      const StochasticRanking a = random_stochastic(rng, inst, 3);
      const StochasticRanking b = random_stochastic(rng, inst, 3);
      const double g = testing::uniform(rng, 0.05, 0.95);
      std::vector<Atom> atoms;
      for (const Atom& x : a.atoms()) atoms.push_back({(1.0 - g) * x.weight, x.ranking});
      for (const Atom& x : b.atoms()) atoms.push_back({g * x.weight, x.ranking});
      const UtilityProfile mix = utility_profile(StochasticRanking(std::move(atoms)), inst);
      const UtilityProfile ua = utility_profile(a, inst), ub = utility_profile(b, inst);
      for (std::size_t k = 0; k < mix.size(); ++k) {
        CHECK(mix.values[k] == doctest::Approx((1.0 - g) * ua.values[k] + g * ub.values[k]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("property: one-sided exposures sum to E") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const ProblemInstance inst = gen_random(5, 7, Mode::OneSided, 3, 300 + trial);
      const UtilityProfile u = utility_profile(random_stochastic(rng, inst, 3), inst);
      const double e = std::accumulate(u.items().begin(), u.items().end(), 0.0);
      const double big_e =
          5.0 * std::accumulate(inst.exposure_weights.begin(), inst.exposure_weights.end(), 0.0);
      CHECK(e == doctest::Approx(big_e).epsilon(1e-12));
      const ExposureTargets t = exposure_targets(inst, TargetKind::QualityWeighted);
      CHECK(std::accumulate(t.targets.begin(), t.targets.end(), 0.0) == doctest::Approx(big_e).epsilon(1e-12));
    }
  }

  TEST_CASE("property: reciprocal utilities are twice the user-side part") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 20; ++trial) {
      const ProblemInstance inst = gen_random(6, 6, Mode::Reciprocal, 2, 400 + trial);
      const StochasticRanking p = random_stochastic(rng, inst, 2);
      const UtilityProfile u = utility_profile(p, inst);
      double user_side = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
          user_side += inst.mu_user(i, j) * marginal_exposure(p, inst.exposure_weights, i, j);
        }
      }
      CHECK(std::accumulate(u.values.begin(), u.values.end(), 0.0) == doctest::Approx(2.0 * user_side).epsilon(1e-12));
    }
  }
}
