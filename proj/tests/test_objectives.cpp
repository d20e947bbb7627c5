#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fairrank/instances.hpp"
#include "fairrank/objectives.hpp"
#include "support.hpp"

using namespace fairrank;

namespace {

UtilityProfile profile(std::vector<double> values, std::size_t split) { return {std::move(values), split}; }

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> u(n);
  for (double& x : u) x = testing::uniform(rng, 0.1, 10.0);
  return u;
}

// Central differences of the value, compared to the returned gradient.
double max_fd_error(const std::function<Evaluation(const UtilityProfile&)>& f, const UtilityProfile& u) {
  const Evaluation e = f(u);
  REQUIRE(e.grad.size() == u.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    UtilityProfile up = u, dn = u;
    up.values[k] += 1e-6;
    dn.values[k] -= 1e-6;
    const double fd = (f(up).value - f(dn).value) / 2e-6;
    const double scale = std::max({std::abs(fd), std::abs(e.grad[k]), 1e-8});
    worst = std::max(worst, std::abs(fd - e.grad[k]) / scale);
  }
  return worst;
}

}  // namespace

TEST_SUITE("objectives") {
  TEST_CASE("psi values") {
    CHECK(psi(4, 0.5) == 2.0);
    CHECK(psi(1, 0) == 0.0);
    CHECK(psi(2, -1) == -0.5);
    CHECK(psi(0, 0.5) == 0.0);
    CHECK_THROWS_AS(psi(0, 0), Error);
    CHECK_THROWS_AS(psi(-1, -2), Error);
  }

  TEST_CASE("psi derivative") {
    CHECK(psi_prime(4, 0.5) == 0.25);
    CHECK(psi_prime(2, 0) == 0.5);
    CHECK(psi_prime(1, -2) == 2.0);
    CHECK(psi_prime(0, 1) == 1.0);
    CHECK_THROWS_AS(psi_prime(0, 0.5), Error);
  }

  TEST_CASE("welfare examples") {
    const Evaluation lin = welfare(profile({2, 3, 1, 4}, 2), {0.5, 1, 1, 0});
    CHECK(lin.value == 5.0);
    CHECK(lin.grad == std::vector<double>{0.5, 0.5, 0.5, 0.5});

    CHECK(welfare(profile({1, 1, 1, 1}, 2), {0.5, 0, 0, 0}).value == 0.0);

    const double by_hand = 0.75 * std::sqrt(4.0) + 0.25 * std::log(1.0);
    CHECK(welfare(profile({4, 1}, 1), {0.25, 0.5, 0, 0}).value == doctest::Approx(by_hand).epsilon(1e-15));

    // Single population: one sum with alpha1 and unit weight.
    const Evaluation rec = welfare(profile({1, 4}, 2), {0.5, 0.5, -3, 0});
    CHECK(rec.value == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(rec.grad[1] == doctest::Approx(0.25).epsilon(1e-15));
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(WelfareParams({1.5, 0, 0, 1e-4}).validate(), Error);
    CHECK_THROWS_AS(WelfareParams({0.5, 2, 0, 1e-4}).validate(), Error);
    CHECK_THROWS_AS(WelfareParams({0.5, 0, 0, -1}).validate(), Error);
    CHECK(WelfareParams{0.5, 0, -1, 1e-4}.strictly_concave());
    CHECK_FALSE(WelfareParams{0.5, 1, 0, 1e-4}.strictly_concave());
    PenaltyParams p;
    p.beta = -1;
    CHECK_THROWS_AS(p.validate(), Error);
    p.beta = 1;
    p.sqrt_eps = 0;
    CHECK_THROWS_AS(p.validate(), Error);
  }

  TEST_CASE("penalized objective examples") {
    const ProblemInstance inst = testing::one_sided(2, 2, {1, 0, 0, 1}, {1});
    const std::vector<double> t{1, 1};
    PenaltyParams off;
    off.beta = 0;
    const Evaluation zero = penalized_objective(profile({0.3, 0.4, 2, 0}, 2), t, off, inst);
    CHECK(zero.value == 0.7);
    CHECK(zero.grad == std::vector<double>{1, 1, 0, 0});

    PenaltyParams on;
    on.beta = 7;
    CHECK(penalized_objective(profile({0.3, 0.4, 1, 1}, 2), t, on, inst).value ==
          doctest::Approx(0.7 - 7 * std::sqrt(1e-12)).epsilon(1e-15));

    PenaltyParams raw;
    raw.beta = 1;
    raw.sqrt_eps = 1e-300;
    raw.normalize_by_n = false;
    const Evaluation e = penalized_objective(profile({0, 0, 2, 0}, 2), t, raw, inst);
    CHECK(e.value == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(e.grad[2] == doctest::Approx(-1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(e.grad[3] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));

    // With normalization D is divided by the population (4 here).
    raw.normalize_by_n = true;
    CHECK(penalized_objective(profile({0, 0, 2, 0}, 2), t, raw, inst).value ==
          doctest::Approx(-std::sqrt(0.5)).epsilon(1e-12));
  }

  TEST_CASE("eq-util needs a reciprocal instance") {
    const ProblemInstance inst = testing::one_sided(2, 2, {1, 0, 0, 1}, {1});
    PenaltyParams p;
    p.kind = PenaltyKind::EqualUtility;
    p.beta = 1;
    CHECK_THROWS_AS(make_penalized_objective(inst, p), Error);
    CHECK_NOTHROW(make_penalized_objective(gen_pair_triangle(5).instance, p));
  }

  TEST_CASE("pairwise penalty") {
    const std::vector<double> ones{1, 1}, ones3{1, 1, 1};
    const std::vector<double> a{2, 4}, qa{1, 2};
    CHECK(pairwise_penalty(a, qa) == 0.0);
    const std::vector<double> b{0, 1};
    const std::vector<double> c{1, 2, 3};
    auto brute = [](const std::vector<double>& u, const std::vector<double>& q) {
      double s = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        for (std::size_t k = 0; k < u.size(); ++k) s += std::abs(u[j] / q[j] - u[k] / q[k]);
      }
      return s;
    };
    CHECK(brute(b, ones) == 2.0);
    CHECK(brute(c, ones3) == 8.0);
    CHECK(pairwise_penalty(b, ones) == 2.0);
    CHECK(pairwise_penalty(c, ones3) == 8.0);
    const std::vector<double> zq{1, 0};
    CHECK_THROWS_AS(pairwise_penalty(b, zq), Error);
  }

  TEST_CASE("group welfare") {
    ProblemInstance inst = testing::one_sided(2, 1, {1, 1}, {1});
    CHECK_THROWS_AS(group_welfare(profile({1, 1, 1}, 2), inst, {0, 0, 0, 0}), Error);

    inst.groups = Groups{{{0}, {0, 1}}, {}};
    const Evaluation e = group_welfare(profile({1, 1, 1}, 2), inst, {0, 0, 0, 0});
    CHECK(e.value == doctest::Approx(std::log(1.0) + std::log(2.0)).epsilon(1e-15));
    CHECK(e.grad[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(e.grad[1] == doctest::Approx(0.5).epsilon(1e-15));

    inst.groups = Groups{{{0}, {1}}, {{0}}};
    const WelfareParams w{0.3, 0.5, -1, 1e-4};
    const UtilityProfile u = profile({2, 5, 3}, 2);
    const Evaluation g = group_welfare(u, inst, w), s = welfare(u, w);
    CHECK(g.value == doctest::Approx(s.value).epsilon(1e-14));
    for (std::size_t k = 0; k < 3; ++k) CHECK(g.grad[k] == doctest::Approx(s.grad[k]).epsilon(1e-14));

    inst.groups = Groups{{{0, 1}}, {}};
    const Evaluation whole = group_welfare(profile({2, 5, 3}, 2), inst, {0.25, 1, 1, 0});
    CHECK(whole.value == doctest::Approx(0.75 * 7 + 0.25 * 3).epsilon(1e-15));
  }

  TEST_CASE("property: finite differences match every gradient") {
    std::mt19937_64 rng(31);
    ProblemInstance inst = gen_random(4, 5, Mode::OneSided, 2, 5);
    inst.groups = Groups{{{0, 1}, {1, 2, 3}}, {{0, 4}, {1, 2}, {3}}};
    const ProblemInstance rec = gen_random(5, 5, Mode::Reciprocal, 2, 6);
    const auto qt = exposure_targets(inst, TargetKind::QualityWeighted).targets;
    const auto et = exposure_targets(inst, TargetKind::Equal).targets;

    for (int trial = 0; trial < 20; ++trial) {
      const UtilityProfile u = profile(random_values(rng, 9), 4);
      const UtilityProfile r = profile(random_values(rng, 5), 5);
      for (double a : {1.0, 0.5, 0.0, -1.0, -2.0}) {
        const WelfareParams w{0.4, a, a, 1e-4};
        CHECK(max_fd_error([&](const UtilityProfile& x) { return welfare(x, w); }, u) < 1e-4);
        CHECK(max_fd_error([&](const UtilityProfile& x) { return group_welfare(x, inst, w); }, u) < 1e-4);
      }
      PenaltyParams p;
      p.beta = 3;
      p.kind = PenaltyKind::QualityWeighted;
      CHECK(max_fd_error([&](const UtilityProfile& x) { return penalized_objective(x, qt, p, inst); }, u) < 1e-4);
      p.kind = PenaltyKind::EqualExposure;
      CHECK(max_fd_error([&](const UtilityProfile& x) { return penalized_objective(x, et, p, inst); }, u) < 1e-4);
      p.kind = PenaltyKind::EqualUtility;
      CHECK(max_fd_error([&](const UtilityProfile& x) { return penalized_objective(x, {}, p, rec); }, r) < 1e-4);
    }
  }

  TEST_CASE("property: welfare is increasing in every component") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 200; ++trial) {
      const double a1 = testing::uniform(rng, -3, 1), a2 = testing::uniform(rng, -3, 1);
      const WelfareParams w{testing::uniform(rng, 0.05, 0.95), a1, a2, 1e-4};
      UtilityProfile u = profile(random_values(rng, 6), 3);
      const double before = welfare(u, w).value;
      u.values[rng() % 6] += testing::uniform(rng, 0.01, 1.0);
      CHECK(welfare(u, w).value > before);
    }
  }

  TEST_CASE("property: Pigou-Dalton transfers do not decrease welfare") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 300; ++trial) {
      const WelfareParams w{testing::uniform(rng, 0.05, 0.95), testing::uniform(rng, -3, 0.99),
                            testing::uniform(rng, -3, 0.99), 1e-4};
      UtilityProfile u = profile(random_values(rng, 6), 3);
      const std::size_t side = rng() % 2;
      std::size_t a = 3 * side + rng() % 3, b = 3 * side + rng() % 3;
      if (a == b) continue;
      if (u.values[a] < u.values[b]) std::swap(a, b);
      const double delta = testing::uniform(rng, 0.0, 0.5) * (u.values[a] - u.values[b]);
      const double before = welfare(u, w).value;
      u.values[a] -= delta;
      u.values[b] += delta;
      CHECK(welfare(u, w).value >= before - 1e-12);
    }
  }

  TEST_CASE("property: beta = 0 is the utilitarian objective") {
    std::mt19937_64 rng(34);
    const ProblemInstance inst = gen_random(3, 4, Mode::OneSided, 2, 9);
    const auto t = exposure_targets(inst, TargetKind::Equal).targets;
    PenaltyParams p;
    p.beta = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const UtilityProfile u = profile(random_values(rng, 7), 3);
      CHECK(penalized_objective(u, t, p, inst).value == u.values[0] + u.values[1] + u.values[2]);
    }
  }

  TEST_CASE("objective factories") {
    const ProblemInstance inst = gen_random(3, 4, Mode::OneSided, 2, 9);
    const Objective w = make_welfare_objective(inst, {0.5, 0, -1, 1e-4});
    CHECK(w.view() == ProfileView::Native);
    REQUIRE(w.curvature_bound().has_value());
    CHECK(*w.curvature_bound() == doctest::Approx(0.5 * 2 * std::pow(1e-4, -3)).epsilon(1e-12));
    PenaltyParams p;
    p.beta = 1;
    CHECK(make_penalized_objective(inst, p).view() == ProfileView::Exposure);
    CHECK_THROWS_AS(make_group_welfare_objective(inst, {}), Error);
  }
}
