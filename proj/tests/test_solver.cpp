#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "fairrank/instances.hpp"
#include "fairrank/objectives.hpp"
#include "fairrank/solver.hpp"
#include "fairrank/utility.hpp"
#include "support.hpp"

using namespace fairrank;

namespace {

double sum_users(const UtilityProfile& u) { return std::accumulate(u.users().begin(), u.users().end(), 0.0); }

// <P, X> of a deterministic ranking with X_ijk = score_ij v_k.
double vertex_value(const DeterministicRanking& r, const std::vector<std::vector<double>>& score,
                    const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.n_users(); ++i) {
    for (std::size_t k = 0; k < r.slots(); ++k) s += score[i][r.user(i)[k]] * v[k];
  }
  return s;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("config validation") {
    SolverConfig c;
    c.iterations = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.iterations = 1;
    c.trace_every = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    const ProblemInstance inst = gen_random(3, 4, Mode::OneSided, 2, 1);
    SolverConfig big;
    big.slots = 3;
    CHECK_THROWS_AS(solve(inst, make_welfare_objective(inst, {}), big), Error);
  }

  TEST_CASE("utilitarian ranking sorts by preference") {
    const ProblemInstance inst = testing::one_sided(1, 3, {0.2, 0.9, 0.5}, {1, 0.5, 0.2});
    const DeterministicRanking r = utilitarian_ranking(inst);
    CHECK(std::vector<std::uint32_t>(r.user(0).begin(), r.user(0).end()) == std::vector<std::uint32_t>{1, 2, 0});
    CHECK(utilitarian_ranking(inst, 1).slots() == 1);

    const ProblemInstance tie = testing::one_sided(1, 3, {0.5, 0.5, 0.5}, {1, 0.5});
    const DeterministicRanking t = utilitarian_ranking(tie);
    CHECK(t.user(0)[0] == 0);
    CHECK(t.user(0)[1] == 1);
  }

  TEST_CASE("reciprocal utilitarian ranking sorts by mu and skips the user") {
    const ProblemInstance inst = gen_random(6, 6, Mode::Reciprocal, 3, 4);
    const DeterministicRanking r = utilitarian_ranking(inst);
    for (std::size_t i = 0; i < 6; ++i) {
      std::vector<std::uint32_t> order;
      for (std::uint32_t j = 0; j < 6; ++j) {
        if (j != i) order.push_back(j);
      }
      std::stable_sort(order.begin(), order.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return inst.mu_user(i, a) > inst.mu_user(i, b); });
      for (std::size_t k = 0; k < 3; ++k) CHECK(r.user(i)[k] == order[k]);
    }
  }

  TEST_CASE("utilitarian ranking matches brute force over permutations") {
    const ProblemInstance inst = gen_random(3, 4, Mode::OneSided, 4, 17);
    std::vector<std::uint32_t> perm{0, 1, 2, 3};
    double best_total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      double best = -1.0;
      std::sort(perm.begin(), perm.end());
      do {
        double s = 0.0;
        for (std::size_t k = 0; k < 4; ++k) s += inst.mu_user(i, perm[k]) * inst.exposure_weights[k];
        best = std::max(best, s);
      } while (std::next_permutation(perm.begin(), perm.end()));
      best_total += best;
    }
    const UtilityProfile u = utility_profile(StochasticRanking(utilitarian_ranking(inst)), inst);
    CHECK(sum_users(u) == doctest::Approx(best_total).epsilon(1e-14));
  }

  TEST_CASE("oracle special cases") {
    const ProblemInstance inst = gen_random(4, 6, Mode::OneSided, 3, 2);
    const std::size_t n = profile_size(inst, ProfileView::Native);
    std::vector<double> ones(n, 1.0);
    CHECK(linear_oracle(inst, ProfileView::Native, ones, 3) == utilitarian_ranking(inst));

    std::vector<double> items_only(n, 0.0);
    const std::vector<double> c{0.3, 2.0, 0.1, 5.0, 1.0, 0.7};
    for (std::size_t j = 0; j < 6; ++j) items_only[4 + j] = c[j];
    const DeterministicRanking r = linear_oracle(inst, ProfileView::Native, items_only, 3);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(r.user(i)[0] == 3);
      CHECK(r.user(i)[1] == 1);
      CHECK(r.user(i)[2] == 4);
    }

    std::vector<double> bad = ones;
    bad[2] = std::nan("");
    CHECK_THROWS_AS(linear_oracle(inst, ProfileView::Native, bad, 3), Error);
    CHECK_THROWS_AS(linear_oracle(inst, ProfileView::Native, std::vector<double>(3, 1.0), 3), Error);
  }

  TEST_CASE("oracle vertex beats every deterministic ranking") {
    std::mt19937_64 rng(41);
    ProblemInstance inst = gen_random(2, 3, Mode::OneSided, 2, 3);
    inst.exposure_weights = {1.0, 0.5};
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> grad(5);
      for (double& g : grad) g = testing::uniform(rng, -1, 2);
      std::vector<std::vector<double>> score(2, std::vector<double>(3));
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) score[i][j] = grad[i] * inst.mu_user(i, j) + grad[2 + j];
      }
      const double got = vertex_value(linear_oracle(inst, ProfileView::Native, grad, 2), score, inst.exposure_weights);
      // All 6 x 6 joint vertices.
      std::vector<std::vector<std::uint32_t>> lists;
      for (std::uint32_t a = 0; a < 3; ++a) {
        for (std::uint32_t b = 0; b < 3; ++b) {
          if (a != b) lists.push_back({a, b});
        }
      }
      double best = -1e300;
      for (const auto& l0 : lists) {
        for (const auto& l1 : lists) {
          const DeterministicRanking r(2, 2, {l0[0], l0[1], l1[0], l1[1]});
          best = std::max(best, vertex_value(r, score, inst.exposure_weights));
        }
      }
      CHECK(got == doctest::Approx(best).epsilon(1e-14));
      CHECK(got >= best - 1e-14);
    }
  }

  TEST_CASE("linear welfare keeps the utilitarian ranking") {
    const ProblemInstance inst = gen_random(5, 8, Mode::OneSided, 3, 12);
    SolverConfig cfg;
    cfg.iterations = 50;
    const SolveResult r = solve(inst, make_welfare_objective(inst, {0.5, 1, 1, 0}), cfg);
    REQUIRE(r.ranking.atoms().size() == 1);
    CHECK(r.ranking.atoms()[0].ranking == utilitarian_ranking(inst));
    CHECK(r.trace.final_gap == doctest::Approx(0.0));
  }

  TEST_CASE("qw-counterexample welfare reaches the identity assignment") {
    const GeneratedInstance g = gen_qw_counterexample(2, 1);
    SolverConfig cfg;
    cfg.iterations = 2000;
    const SolveResult r = solve(g.instance, make_welfare_objective(g.instance, {0.5, 0, 0, 1e-4}), cfg);
    for (double u : r.utilities.users()) CHECK(u == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("leader-star welfare matches a grid over the one-slot polytope") {
    const GeneratedInstance g = gen_leader_star(4);
    const WelfareParams w{0.5, 0, 0, 1e-4};
    SolverConfig cfg;
    cfg.iterations = 3000;
    const SolveResult r = solve(g.instance, make_welfare_objective(g.instance, w), cfg);
    CHECK(r.utilities.values[0] == doctest::Approx(4.0).epsilon(1e-3));
    for (std::size_t i = 1; i < 4; ++i) CHECK(r.utilities.values[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-2));

    // Users 2..4 always show user 1 at the optimum; grid over user 1's split.
    double best = -1e300;
    const int steps = 60;
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; a + b <= steps; ++b) {
        const double p2 = double(a) / steps, p3 = double(b) / steps, p4 = 1.0 - p2 - p3;
        const UtilityProfile u{{4.0, 1.0 + p2, 1.0 + p3, 1.0 + p4}, 4};
        best = std::max(best, welfare(u, w).value);
      }
    }
    CHECK(r.trace.final_objective >= best - 1e-6);
  }

  TEST_CASE("property: gap bounds suboptimality and is non-negative") {
    const ProblemInstance inst = gen_random(8, 12, Mode::OneSided, 3, 21);
    const Objective obj = make_welfare_objective(inst, {0.5, 0, 0, 1e-4});
    SolverConfig cfg;
    cfg.iterations = 200;
    const SolveResult shortrun = solve(inst, obj, cfg);
    cfg.iterations = 3000;
    const double best = solve(inst, obj, cfg).trace.final_objective;
    for (const TraceRow& row : shortrun.trace.rows) {
      CHECK(row.gap >= -1e-12);
      CHECK(best <= row.objective + row.gap + 1e-9);
    }
  }

  TEST_CASE("property: step sizes and atom weights") {
    const ProblemInstance inst = gen_random(6, 9, Mode::TwoSidedPrefs, 3, 22);
    SolverConfig cfg;
    cfg.iterations = 300;
    const SolveResult r = solve(inst, make_welfare_objective(inst, {0.3, 0.5, -1, 1e-4}), cfg);
    REQUIRE(r.trace.rows.size() == 300);
    for (const TraceRow& row : r.trace.rows) CHECK(row.gamma == 2.0 / (double(row.iter) + 2.0));
    double total = 0.0;
    for (const Atom& a : r.ranking.atoms()) total += a.weight;
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(r.ranking.atoms().size() <= 301);
    // Storage is one top-K list per user per atom, never a dense tensor.
    for (const Atom& a : r.ranking.atoms()) CHECK(a.ranking.items().size() == 6 * 3);
  }

  TEST_CASE("property: results do not depend on the thread count") {
    const ProblemInstance inst = gen_random(30, 40, Mode::OneSided, 5, 23);
    const Objective obj = make_welfare_objective(inst, {0.5, 0, 0, 1e-4});
    SolverConfig cfg;
    cfg.iterations = 100;
    const SolveResult a = solve(inst, obj, cfg);
    cfg.threads = 4;
    const SolveResult b = solve(inst, obj, cfg);
    std::ostringstream ta, tb;
    write_trace_csv(ta, a.trace, false);
    write_trace_csv(tb, b.trace, false);
    CHECK(ta.str() == tb.str());
    CHECK(a.utilities.values == b.utilities.values);
    REQUIRE(a.ranking.atoms().size() == b.ranking.atoms().size());
    for (std::size_t k = 0; k < a.ranking.atoms().size(); ++k) {
      CHECK(a.ranking.atoms()[k].ranking == b.ranking.atoms()[k].ranking);
      CHECK(a.ranking.atoms()[k].weight == b.ranking.atoms()[k].weight);
    }
  }

  TEST_CASE("gap tolerance stops early") {
    const ProblemInstance inst = gen_random(5, 8, Mode::OneSided, 3, 24);
    SolverConfig cfg;
    cfg.iterations = 5000;
    cfg.gap_tolerance = 1e-2;
    const SolveResult r = solve(inst, make_welfare_objective(inst, {0.5, 0, 0, 1e-4}), cfg);
    CHECK(r.trace.iterations_run < 5000);
  }

  TEST_CASE("trace csv layout") {
    const ProblemInstance inst = gen_random(3, 4, Mode::OneSided, 2, 25);
    SolverConfig cfg;
    cfg.iterations = 10;
    cfg.trace_every = 4;
    const SolveResult r = solve(inst, make_welfare_objective(inst, {}), cfg);
    std::ostringstream os;
    write_trace_csv(os, r.trace, false);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "iter,objective,gap,gamma,elapsed_ms");
    std::vector<std::string> iters;
    while (std::getline(is, line)) iters.push_back(line.substr(0, line.find(',')));
    CHECK(iters == std::vector<std::string>{"4", "8", "10"});
  }
}
