#include "fairrank/repro.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "fairrank/analysis.hpp"
#include "fairrank/instances.hpp"
#include "fairrank/objectives.hpp"
#include "fairrank/solver.hpp"
#include "fairrank/utility.hpp"

namespace fairrank::repro {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string check_line(bool ok, const std::string& text) { return (ok ? "ok   " : "FAIL ") + text; }

double user_total(const UtilityProfile& u) {
  auto users = u.users();
  return std::accumulate(users.begin(), users.end(), 0.0);
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::mt19937_64 rng_;
};

SolverConfig iterations(std::size_t t) {
  SolverConfig c;
  c.iterations = t;
  return c;
}

PenaltyParams penalty(PenaltyKind kind, double beta) {
  PenaltyParams p;
  p.kind = kind;
  p.beta = beta;
  p.normalize_by_n = true;
  return p;
}

void finish(CriterionResult& r, Clock::time_point start) { r.runtime_ms = elapsed_ms(start); }

}  // namespace

// ---- limit checks on the proof instances ----

CriterionResult prop2(std::size_t d, double beta, std::size_t iters, double sqrt_eps) {
  const auto start = Clock::now();
  CriterionResult r;
  r.name = "quality-weighted limit on the counterexample, d=" + std::to_string(d);
  const double x = static_cast<double>(d);
  const double p = (x + 1.0) * (x + 2.0) / (x * (3.0 * x + 2.0)) - 1.0 / x;
  const double expected = 1.0 - p / 2.0;

  const GeneratedInstance g = gen_qw_counterexample(d, 1);
  PenaltyParams params = penalty(PenaltyKind::QualityWeighted, beta);
  params.sqrt_eps = sqrt_eps;
  const SolveResult qua = solve(g.instance, make_penalized_objective(g.instance, params), iterations(iters));
  double worst = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    worst = std::max(worst, std::abs(qua.utilities.values[i] - expected));
    mean += qua.utilities.values[i] / x;
  }
  r.expected = num(expected);
  r.observed = num(mean);
  r.tolerance = num(kProp2Tol);
  r.passed = worst <= kProp2Tol;
  r.detail.push_back(check_line(r.passed, "max |u_i - (1 - p/2)| over pattern users = " + num(worst) + ", p = " + num(p)));
  r.detail.push_back("     sqrt_eps " + num(sqrt_eps) + ", final gap " + num(qua.trace.final_gap));
  finish(r, start);
  return r;
}

CriterionResult prop3(std::size_t n, std::size_t iters) {
  const auto start = Clock::now();
  CriterionResult r;
  r.name = "equal-utility collapse on the pair/triangle, n=" + std::to_string(n);
  const GeneratedInstance g = gen_pair_triangle(n);

  bool ok = true;
  double welfare_total = 0.0;
  for (double alpha : {0.0, -1.0}) {
    const SolveResult w = solve(g.instance, make_welfare_objective(g.instance, {0.5, alpha, alpha, 1e-4}), iterations(iters));
    const double lo = *std::min_element(w.utilities.values.begin(), w.utilities.values.end());
    const bool good = lo >= 1.5 - kCollapseMinTol;
    ok = ok && good;
    if (alpha == 0.0) welfare_total = user_total(w.utilities);
    r.detail.push_back(check_line(good, "welfare alpha=" + num(alpha) + ": min_i u_i = " + num(lo) + " (>= 1.5 - " +
                                            num(kCollapseMinTol) + ")"));
  }

  std::vector<double> totals;
  for (double beta : {1.0, 10.0, 100.0}) {
    const SolveResult s = solve(g.instance, make_penalized_objective(g.instance, penalty(PenaltyKind::EqualUtility, beta)),
                                iterations(iters));
    totals.push_back(user_total(s.utilities));
    r.detail.push_back("     eq-util beta=" + num(beta) + ": total utility " + num(totals.back()));
  }
  for (std::size_t k = 1; k < totals.size(); ++k) {
    const bool good = totals[k] <= totals[k - 1] + kCollapseStepTol;
    ok = ok && good;
    r.detail.push_back(check_line(good, "step " + std::to_string(k) + " non-increasing: " + num(totals[k - 1]) + " -> " +
                                            num(totals[k])));
  }
  const bool collapsed = totals.back() < kCollapseFraction * welfare_total;
  ok = ok && collapsed;
  r.detail.push_back(check_line(collapsed, "total at beta=100 below " + num(kCollapseFraction) + " x welfare total " +
                                               num(welfare_total)));
  r.expected = "< " + num(kCollapseFraction * welfare_total);
  r.observed = num(totals.back());
  r.tolerance = num(kCollapseStepTol) + " per step";
  r.passed = ok;
  finish(r, start);
  return r;
}

CriterionResult leader(std::size_t n, double beta, std::size_t iters) {
  const auto start = Clock::now();
  CriterionResult r;
  r.name = "baseline limits on the leader star, n=" + std::to_string(n);
  const GeneratedInstance g = gen_leader_star(n);
  const double expo_expected = 4.0;
  const double qua_expected = 2.0 + static_cast<double>(n);
  const SolveResult expo = solve(g.instance, make_penalized_objective(g.instance, penalty(PenaltyKind::EqualExposure, beta)),
                                 iterations(iters));
  const SolveResult qua = solve(g.instance, make_penalized_objective(g.instance, penalty(PenaltyKind::QualityWeighted, beta)),
                                iterations(iters));
  const double e = user_total(expo.utilities);
  const double q = user_total(qua.utilities);
  const bool e_ok = std::abs(e - expo_expected) <= 0.02 * expo_expected;
  const bool q_ok = std::abs(q - qua_expected) <= 0.02 * qua_expected;
  r.detail.push_back(check_line(e_ok, "equal exposure total " + num(e) + " vs " + num(expo_expected)));
  r.detail.push_back(check_line(q_ok, "quality-weighted total " + num(q) + " vs " + num(qua_expected)));
  r.expected = num(expo_expected) + ", " + num(qua_expected);
  r.observed = num(e) + ", " + num(q);
  r.tolerance = "2%";
  r.passed = e_ok && q_ok;
  finish(r, start);
  return r;
}

namespace {

struct MicroTotals {
  double global = 0.0;
  double expo = 0.0;
  double qua = 0.0;
};

MicroTotals micro_totals(std::size_t d, std::size_t n_blocks) {
  const GeneratedInstance g = gen_micro_example(d, n_blocks);
  MicroTotals t;
  t.global = user_total(utility_profile(*g.reference.at("global").ranking, g.instance));
  t.expo = user_total(utility_profile(*g.reference.at("per-ranking-expo").ranking, g.instance));
  t.qua = user_total(utility_profile(*g.reference.at("per-ranking-qua").ranking, g.instance));
  return t;
}

CriterionResult micro_against(std::size_t d, std::size_t n_blocks, double global, double expo, double qua) {
  const auto start = Clock::now();
  CriterionResult r;
  r.name = "per-ranking constraint totals, d=" + std::to_string(d) + ", N=" + std::to_string(n_blocks);
  const MicroTotals t = micro_totals(d, n_blocks);
  const bool g_ok = std::abs(t.global - global) <= kMicroTol;
  const bool e_ok = std::abs(t.expo - expo) <= kMicroTol;
  const bool q_ok = std::abs(t.qua - qua) <= kMicroTol;
  r.detail.push_back(check_line(g_ok, "global optimum total " + num(t.global) + " vs " + num(global)));
  r.detail.push_back(check_line(e_ok, "per-ranking equal exposure total " + num(t.expo) + " vs " + num(expo)));
  r.detail.push_back(check_line(q_ok, "per-ranking quality-weighted total " + num(t.qua) + " vs " + num(qua)));
  r.expected = num(expo) + ", " + num(qua) + ", " + num(global);
  r.observed = num(t.expo) + ", " + num(t.qua) + ", " + num(t.global);
  r.tolerance = num(kMicroTol);
  r.passed = g_ok && e_ok && q_ok;
  finish(r, start);
  return r;
}

}  // namespace

CriterionResult micro(std::size_t d, std::size_t n_blocks) {
  const double x = static_cast<double>(d);
  const double global = static_cast<double>(n_blocks * (d + 1));
  return micro_against(d, n_blocks, global, 2.0 / (x + 1.0) * global, (0.5 + 1.0 / x) * global);
}

// ---- acceptance criteria ----

CriterionResult criterion_prop2_limit() {
  const auto start = Clock::now();
  CriterionResult r = prop2(10, 1e4, kIterations);
  r.id = 1;

  const GeneratedInstance g = gen_qw_counterexample(10, 1);
  const SolveResult w = solve(g.instance, make_welfare_objective(g.instance, {0.5, 0.0, 0.0, 1e-4}), iterations(kIterations));
  PenaltyParams params = penalty(PenaltyKind::QualityWeighted, 1e4);
  params.sqrt_eps = kProp2SqrtEps;
  const SolveResult q = solve(g.instance, make_penalized_objective(g.instance, params), iterations(kIterations));
  const Dominance users = dominance(w.utilities.users(), q.utilities.users());
  const Dominance items = dominance(w.utilities.items(), q.utilities.items());
  const bool dom_ok = users == Dominance::StrictLorenz && items == Dominance::StrictLorenz;
  r.detail.push_back(check_line(dom_ok, std::string("welfare vs quality-weighted: users ") + to_string(users) +
                                            ", items " + to_string(items)));

  const double seconds = elapsed_ms(start) / 1000.0;
  const bool time_ok = seconds < kProp2Seconds;
  r.detail.push_back(check_line(time_ok, "runtime " + num(seconds) + " s < " + num(kProp2Seconds) + " s"));
  r.passed = r.passed && dom_ok && time_ok;
  finish(r, start);
  return r;
}

CriterionResult criterion_leader_limits() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 2;
  r.name = "leader-star limits, n=10, beta=1e3";
  const std::size_t n = 10;
  const GeneratedInstance g = gen_leader_star(n);
  const double beta = 1e3;

  const double expo = user_total(
      solve(g.instance, make_penalized_objective(g.instance, penalty(PenaltyKind::EqualExposure, beta)), iterations(kIterations))
          .utilities);
  const double qua = user_total(
      solve(g.instance, make_penalized_objective(g.instance, penalty(PenaltyKind::QualityWeighted, beta)), iterations(kIterations))
          .utilities);
  const double wel = user_total(
      solve(g.instance, make_welfare_objective(g.instance, {0.5, 0.0, 0.0, 1e-4}), iterations(kIterations)).utilities);

  const double expo_expected = 4.0;
  const double qua_expected = 2.0 + static_cast<double>(n);
  const double wel_expected = 2.0 * static_cast<double>(n);
  const bool e_ok = std::abs(expo - expo_expected) <= kLeaderExpoTol;
  const bool q_ok = std::abs(qua - qua_expected) <= kLeaderQuaTol;
  const bool w_ok = std::abs(wel - wel_expected) <= kLeaderWelfareTol;
  r.detail.push_back(check_line(e_ok, "equal exposure total " + num(expo) + " vs 4 +- " + num(kLeaderExpoTol)));
  r.detail.push_back(check_line(q_ok, "quality-weighted total " + num(qua) + " vs 12 +- " + num(kLeaderQuaTol)));
  r.detail.push_back(check_line(w_ok, "welfare total " + num(wel) + " vs 20 +- " + num(kLeaderWelfareTol)));
  const double seconds = elapsed_ms(start) / 1000.0;
  const bool time_ok = seconds < kLeaderSeconds;
  r.detail.push_back(check_line(time_ok, "runtime " + num(seconds) + " s < " + num(kLeaderSeconds) + " s"));
  r.expected = "4, 12, 20";
  r.observed = num(expo) + ", " + num(qua) + ", " + num(wel);
  r.tolerance = num(kLeaderExpoTol) + ", " + num(kLeaderQuaTol) + ", " + num(kLeaderWelfareTol);
  r.passed = e_ok && q_ok && w_ok && time_ok;
  finish(r, start);
  return r;
}

CriterionResult criterion_prop3_collapse() {
  const auto start = Clock::now();
  CriterionResult r = prop3(5, kIterations);
  r.id = 3;
  const double seconds = elapsed_ms(start) / 1000.0;
  const bool time_ok = seconds < kProp3Seconds;
  r.detail.push_back(check_line(time_ok, "runtime " + num(seconds) + " s < " + num(kProp3Seconds) + " s"));
  r.passed = r.passed && time_ok;
  finish(r, start);
  return r;
}

CriterionResult criterion_micro_ratios() {
  CriterionResult r = micro_against(4, 1, 5.0, 2.0, 3.75);
  r.id = 4;
  return r;
}

CriterionResult criterion_fw_certificate() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 5;
  r.name = "Frank-Wolfe gap certificate on random 50x100, K=10, seed 7";
  const ProblemInstance inst = gen_random(50, 100, Mode::OneSided, 10, 7);
  const SolveResult s = solve(inst, make_welfare_objective(inst, {0.5, 0.0, 0.0, 1e-4}), iterations(kIterations));
  const auto& rows = s.trace.rows;

  double lo = s.trace.final_objective;
  double hi = s.trace.final_objective;
  for (const TraceRow& row : rows) {
    lo = std::min(lo, row.objective);
    hi = std::max(hi, row.objective);
  }
  const double range = hi - lo;
  const double per_user = s.trace.final_gap / static_cast<double>(inst.n_users());
  const bool gap_ok = per_user <= kGapPerUserFactor * range;
  r.detail.push_back(check_line(gap_ok, "final gap per user " + num(per_user) + " <= " + num(kGapPerUserFactor) +
                                            " x W range " + num(range)));

  auto gap_at = [&rows](std::size_t t) { return rows.at(t - 1).gap; };
  double c = 0.0;
  for (std::size_t t = 1; t <= 10; ++t) c = std::max(c, static_cast<double>(t) * gap_at(t));
  const bool trend_ok = gap_at(1000) <= gap_at(100);
  r.detail.push_back(check_line(trend_ok, "g_1000 = " + num(gap_at(1000)) + " <= g_100 = " + num(gap_at(100))));
  bool rate_ok = true;
  for (std::size_t t : {100, 1000}) {
    const bool good = gap_at(t) <= c / static_cast<double>(t);
    rate_ok = rate_ok && good;
    r.detail.push_back(check_line(good, "g_" + std::to_string(t) + " = " + num(gap_at(t)) + " <= C/t = " +
                                            num(c / static_cast<double>(t)) + " (C = max_{t<=10} t g_t)"));
  }
  const double seconds = elapsed_ms(start) / 1000.0;
  const bool time_ok = seconds < kCertificateSeconds;
  r.detail.push_back(check_line(time_ok, "runtime " + num(seconds) + " s < " + num(kCertificateSeconds) + " s"));
  r.expected = "<= " + num(kGapPerUserFactor * range);
  r.observed = num(per_user);
  r.tolerance = num(kGapPerUserFactor) + " x W range";
  r.passed = gap_ok && trend_ok && rate_ok && time_ok;
  finish(r, start);
  return r;
}

namespace {

// Largest relative error between the analytic gradient and central
// differences over the profile components.
double max_gradient_error(const Objective& f, UtilityProfile u) {
  const Evaluation e = f(u);
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double x = u.values[k];
    u.values[k] = x + kFiniteDiffStep;
    const double up = f(u).value;
    u.values[k] = x - kFiniteDiffStep;
    const double down = f(u).value;
    u.values[k] = x;
    const double fd = (up - down) / (2.0 * kFiniteDiffStep);
    const double scale = std::max({std::abs(e.grad[k]), std::abs(fd), 1e-12});
    worst = std::max(worst, std::abs(fd - e.grad[k]) / scale);
  }
  return worst;
}

UtilityProfile random_profile(Uniform& rng, std::size_t size, std::size_t split) {
  UtilityProfile u;
  u.side_split = split;
  u.values.resize(size);
  for (double& x : u.values) x = rng(0.1, 10.0);
  return u;
}

}  // namespace

CriterionResult criterion_gradient_gates() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 6;
  r.name = "finite-difference gradient gates, 100 random profiles per objective";
  constexpr std::size_t kProfiles = 100;

  ProblemInstance one_sided = gen_random(6, 5, Mode::OneSided, 3, 11);
  one_sided.groups = Groups{{{0, 1, 2}, {2, 3}, {3, 4, 5}}, {{0, 1}, {1, 2, 3}, {4}}};
  ProblemInstance reciprocal = gen_random(6, 6, Mode::Reciprocal, 2, 12);
  reciprocal.groups = Groups{{{0, 1, 2}, {2, 3, 4}, {5}}, {}};

  struct Case {
    std::string label;
    Objective objective;
    const ProblemInstance* inst;
  };
  std::vector<Case> cases;
  for (double a : {1.0, 0.5, 0.0, -1.0, -2.0}) {
    cases.push_back({"welfare alpha=" + num(a), make_welfare_objective(one_sided, {0.3, a, a, 1e-4}), &one_sided});
    cases.push_back({"reciprocal welfare alpha=" + num(a), make_welfare_objective(reciprocal, {0.5, a, a, 1e-4}), &reciprocal});
  }
  cases.push_back({"quality-weighted penalty", make_penalized_objective(one_sided, penalty(PenaltyKind::QualityWeighted, 2.0)), &one_sided});
  cases.push_back({"equal exposure penalty", make_penalized_objective(one_sided, penalty(PenaltyKind::EqualExposure, 2.0)), &one_sided});
  cases.push_back({"equal utility penalty", make_penalized_objective(reciprocal, penalty(PenaltyKind::EqualUtility, 2.0)), &reciprocal});
  cases.push_back({"group welfare, overlapping groups", make_group_welfare_objective(one_sided, {0.4, 0.5, -1.0, 1e-4}), &one_sided});
  cases.push_back({"reciprocal group welfare", make_group_welfare_objective(reciprocal, {0.5, 0.0, 0.0, 1e-4}), &reciprocal});

  Uniform rng(2024);
  double overall = 0.0;
  bool ok = true;
  for (const Case& c : cases) {
    const std::size_t size = profile_size(*c.inst, c.objective.view());
    const std::size_t split = profile_split(*c.inst, c.objective.view());
    double worst = 0.0;
    for (std::size_t p = 0; p < kProfiles; ++p) worst = std::max(worst, max_gradient_error(c.objective, random_profile(rng, size, split)));
    const bool good = worst < kFiniteDiffTol;
    ok = ok && good;
    overall = std::max(overall, worst);
    r.detail.push_back(check_line(good, c.label + ": max relative error " + num(worst)));
  }
  r.expected = "< " + num(kFiniteDiffTol);
  r.observed = num(overall);
  r.tolerance = "relative, step " + num(kFiniteDiffStep);
  r.passed = ok;
  finish(r, start);
  return r;
}

namespace {

// Every single-slot assignment of items to users, skipping self matches in
// reciprocal mode; calls `visit` with each ranking.
template <typename Visit>
void for_each_assignment(const ProblemInstance& inst, std::size_t slots, Visit&& visit) {
  const std::size_t n_users = inst.n_users();
  const std::size_t n_items = inst.n_items();
  // Per user: all ordered K-subsets of the candidate items.
  std::vector<std::vector<std::vector<std::uint32_t>>> lists(n_users);
  for (std::size_t i = 0; i < n_users; ++i) {
    std::vector<std::uint32_t> cand;
    for (std::size_t j = 0; j < n_items; ++j) {
      if (!(inst.mode == Mode::Reciprocal && j == i)) cand.push_back(static_cast<std::uint32_t>(j));
    }
    std::vector<std::uint32_t> current;
    std::vector<bool> used(cand.size(), false);
    auto rec = [&](auto&& self) -> void {
      if (current.size() == slots) {
        lists[i].push_back(current);
        return;
      }
      for (std::size_t c = 0; c < cand.size(); ++c) {
        if (used[c]) continue;
        used[c] = true;
        current.push_back(cand[c]);
        self(self);
        current.pop_back();
        used[c] = false;
      }
    };
    rec(rec);
  }
  std::vector<std::size_t> pick(n_users, 0);
  DeterministicRanking r(n_users, slots);
  while (true) {
    for (std::size_t i = 0; i < n_users; ++i) std::copy(lists[i][pick[i]].begin(), lists[i][pick[i]].end(), r.user(i).begin());
    visit(r);
    std::size_t i = 0;
    while (i < n_users && ++pick[i] == lists[i].size()) pick[i++] = 0;
    if (i == n_users) break;
  }
}

double linear_value(const DeterministicRanking& r, const ProblemInstance& inst, ProfileView view,
                    const std::vector<double>& grad) {
  const UtilityProfile u = utility_profile(r, inst, view);
  double s = 0.0;
  for (std::size_t f = 0; f < u.size(); ++f) s += grad[f] * u.values[f];
  return s;
}

// Dyadic values keep every sum exact, so "equal" means bit-equal.
double dyadic(Uniform& rng, std::size_t steps) { return static_cast<double>(rng.index(steps + 1)) / static_cast<double>(steps); }

ProblemInstance dyadic_instance(Uniform& rng, std::size_t n_users, std::size_t n_items, Mode mode) {
  ProblemInstance inst;
  inst.mode = mode;
  inst.mu_user = Matrix(n_users, n_items);
  for (std::size_t i = 0; i < n_users; ++i) {
    for (std::size_t j = 0; j < n_items; ++j) {
      if (mode == Mode::Reciprocal) {
        if (j > i) {
          inst.mu_user(i, j) = dyadic(rng, 8);
          inst.mu_user(j, i) = inst.mu_user(i, j);
        }
      } else {
        inst.mu_user(i, j) = dyadic(rng, 8);
      }
    }
  }
  if (mode == Mode::TwoSidedPrefs) {
    Matrix item(n_items, n_users);
    for (std::size_t j = 0; j < n_items; ++j) {
      for (std::size_t i = 0; i < n_users; ++i) item(j, i) = dyadic(rng, 8);
    }
    inst.mu_item = std::move(item);
  }
  inst.exposure_weights = {1.0};
  return inst;
}

}  // namespace

CriterionResult criterion_oracle_vertices() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 7;
  r.name = "linear oracle and utilitarian ranking against exhaustive enumeration";
  Uniform rng(77);
  std::size_t checked = 0;
  std::size_t mismatches = 0;

  for (Mode mode : {Mode::OneSided, Mode::TwoSidedPrefs, Mode::Reciprocal}) {
    for (std::size_t n_items = 1; n_items <= 4; ++n_items) {
      for (std::size_t n_users = 1; n_users <= 3; ++n_users) {
        std::size_t users = n_users;
        if (mode == Mode::Reciprocal) {
          if (n_items < 2 || n_users > 1) continue;
          users = n_items;
        }
        for (std::size_t trial = 0; trial < 5; ++trial) {
          const ProblemInstance inst = dyadic_instance(rng, users, n_items, mode);
          for (ProfileView view : {ProfileView::Native, ProfileView::Exposure}) {
            std::vector<double> grad(profile_size(inst, view));
            for (double& g : grad) g = dyadic(rng, 16) * 4.0;
            const DeterministicRanking vertex = linear_oracle(inst, view, grad, 1);
            const double value = linear_value(vertex, inst, view, grad);
            double best = -1.0;
            for_each_assignment(inst, 1, [&](const DeterministicRanking& cand) {
              best = std::max(best, linear_value(cand, inst, view, grad));
            });
            ++checked;
            if (value != best) ++mismatches;
          }
        }
      }
    }
  }
  const bool oracle_ok = mismatches == 0;
  r.detail.push_back(check_line(oracle_ok, std::to_string(checked) + " oracle calls, " + std::to_string(mismatches) +
                                               " differ from the exhaustive maximum"));

  // Utilitarian ranking on 3 users x 4 items with 4 slots: 24^3 rankings.
  ProblemInstance inst = dyadic_instance(rng, 3, 4, Mode::OneSided);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) inst.mu_user(i, j) = dyadic(rng, 64);
  }
  inst.exposure_weights = {1.0, 0.5, 0.25, 0.125};
  const double util_total = user_total(utility_profile(utilitarian_ranking(inst), inst));
  double best = -1.0;
  std::size_t count = 0;
  for_each_assignment(inst, 4, [&](const DeterministicRanking& cand) {
    best = std::max(best, user_total(utility_profile(cand, inst)));
    ++count;
  });
  const bool util_ok = util_total == best;
  r.detail.push_back(check_line(util_ok, "utilitarian total " + num(util_total) + " vs brute force " + num(best) + " over " +
                                             std::to_string(count) + " rankings"));
  r.expected = "exact maxima";
  r.observed = std::to_string(mismatches) + " mismatches, utilitarian " + num(util_total) + " / " + num(best);
  r.tolerance = "0 (dyadic data)";
  r.passed = oracle_ok && util_ok;
  finish(r, start);
  return r;
}

CriterionResult criterion_lorenz_toolkit() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 8;
  r.name = "Lorenz toolkit properties";
  Uniform rng(88);
  constexpr std::size_t kPairs = 1000;

  std::size_t pareto_fail = 0;
  for (std::size_t p = 0; p < kPairs; ++p) {
    const std::size_t n = 1 + rng.index(8);
    std::vector<double> u(n), lower(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = rng(0.1, 10.0);
    // Lower some components (at least one) by up to half their value.
    for (std::size_t i = 0; i < n; ++i) lower[i] = rng() < 0.5 ? u[i] : u[i] * (1.0 - 0.5 * rng());
    const std::size_t k = rng.index(n);
    lower[k] = 0.5 * u[k];
    if (pareto_dominance(u, lower) != Dominance::StrictLorenz) ++pareto_fail;
    if (dominance(u, lower) != Dominance::StrictLorenz) ++pareto_fail;
  }
  const bool pareto_ok = pareto_fail == 0;
  r.detail.push_back(check_line(pareto_ok, "Pareto implies Lorenz: " + std::to_string(pareto_fail) + " failures in " +
                                               std::to_string(kPairs) + " pairs"));

  const std::vector<double> small{1.0, 2.0, 3.0};
  const double g = gini(small);
  const bool gini_ok = std::abs(g - 8.0 / 36.0) <= kGiniTol;
  r.detail.push_back(check_line(gini_ok, "gini(1,2,3) = " + num(g) + " vs 8/36"));

  std::size_t convex_fail = 0;
  for (std::size_t p = 0; p < kPairs; ++p) {
    std::vector<double> u(2 + rng.index(30));
    for (double& x : u) x = rng(0.0, 100.0);
    const std::vector<double> curve = lorenz_curve(u);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i] < curve[i - 1]) ++convex_fail;
      if (i >= 2 && (curve[i] - curve[i - 1]) - (curve[i - 1] - curve[i - 2]) < -kConvexityTol) ++convex_fail;
    }
  }
  const bool convex_ok = convex_fail == 0;
  r.detail.push_back(check_line(convex_ok, "curve monotone and convex on " + std::to_string(kPairs) + " vectors"));

  // One-sided Lorenz improvements: a Pigou-Dalton transfer on the user block,
  // item block untouched.
  std::size_t welfare_fail = 0;
  std::size_t grid = 0;
  for (double lambda : {0.25, 0.5, 0.75}) {
    for (double alpha : {0.5, 0.0, -2.0}) {
      ++grid;
      const WelfareParams params{lambda, alpha, alpha, 1e-4};
      for (std::size_t p = 0; p < 100; ++p) {
        UtilityProfile u;
        u.side_split = 4;
        u.values.resize(7);
        for (double& x : u.values) x = rng(0.1, 5.0);
        auto lo_it = std::min_element(u.values.begin(), u.values.begin() + 4);
        auto hi_it = std::max_element(u.values.begin(), u.values.begin() + 4);
        if (*hi_it - *lo_it < 1e-3) continue;
        UtilityProfile better = u;
        const double delta = rng(0.05, 0.45) * (*hi_it - *lo_it);
        better.values[static_cast<std::size_t>(lo_it - u.values.begin())] += delta;
        better.values[static_cast<std::size_t>(hi_it - u.values.begin())] -= delta;
        if (dominance(better.users(), u.users()) != Dominance::StrictLorenz) continue;
        if (!(welfare(better, params).value > welfare(u, params).value)) ++welfare_fail;
      }
    }
  }
  const bool welfare_ok = welfare_fail == 0;
  r.detail.push_back(check_line(welfare_ok, "welfare prefers the Lorenz improvement on a " + std::to_string(grid) +
                                                "-point theta grid: " + std::to_string(welfare_fail) + " failures"));
  r.expected = "all properties hold";
  r.observed = std::to_string(pareto_fail + convex_fail + welfare_fail) + " failures, gini " + num(g);
  r.tolerance = "gini " + num(kGiniTol) + ", convexity " + num(kConvexityTol);
  r.passed = pareto_ok && gini_ok && convex_ok && welfare_ok;
  finish(r, start);
  return r;
}

CriterionResult criterion_regret_bound() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 9;
  r.name = "regret bound, 20 seeded 5x8 trials per alpha";
  constexpr std::size_t kTrials = 20;
  constexpr double kNoise = 0.05;
  constexpr std::size_t kRegretIterations = 2000;

  std::size_t failures = 0;
  double tightest = 0.0;
  for (double alpha : {1.0, 0.5, 0.0}) {
    std::size_t held = 0;
    for (std::size_t trial = 0; trial < kTrials; ++trial) {
      const std::uint64_t seed = 900 + trial;
      const ProblemInstance inst = gen_random(5, 8, Mode::OneSided, 3, seed);
      Uniform rng(seed * 31 + 7);
      Matrix mu_hat = inst.mu_user;
      for (std::size_t i = 0; i < mu_hat.rows(); ++i) {
        for (std::size_t j = 0; j < mu_hat.cols(); ++j) mu_hat(i, j) = std::max(0.0, mu_hat(i, j) + rng(-kNoise, kNoise));
      }
      const RegretReport rep = regret_bound_check(inst, mu_hat, alpha, iterations(kRegretIterations));
      if (rep.holds) {
        ++held;
      } else {
        ++failures;
      }
      if (rep.rhs + rep.slack > 0.0) tightest = std::max(tightest, rep.lhs / (rep.rhs + rep.slack));
    }
    r.detail.push_back(check_line(held == kTrials, "alpha=" + num(alpha) + ": bound holds in " + std::to_string(held) + "/" +
                                                       std::to_string(kTrials) + " trials"));
  }
  r.expected = "LHS <= RHS + gap slack in every trial";
  r.observed = std::to_string(failures) + " failures, max LHS/(RHS+slack) = " + num(tightest);
  r.tolerance = "solver gaps as slack";
  r.passed = failures == 0;
  finish(r, start);
  return r;
}

CriterionResult criterion_leximin_trend() {
  const auto start = Clock::now();
  CriterionResult r;
  r.id = 10;
  r.name = "item-side leximin trend as alpha2 decreases";
  ProblemInstance inst;
  inst.mode = Mode::OneSided;
  inst.mu_user = Matrix(4, 4, {0.90, 0.60, 0.20, 0.10,
                               0.80, 0.70, 0.30, 0.05,
                               0.95, 0.50, 0.40, 0.20,
                               0.70, 0.65, 0.10, 0.30});
  inst.exposure_weights = {1.0};

  std::vector<double> minima;
  for (double alpha2 : {0.0, -2.0, -5.0}) {
    const double lambda = 1.0 - std::pow(kLeximinScheduleBase, alpha2);
    const SolveResult s = solve(inst, make_welfare_objective(inst, {lambda, 0.0, alpha2, 1e-4}), iterations(kIterations));
    auto items = s.utilities.items();
    minima.push_back(*std::min_element(items.begin(), items.end()));
    r.detail.push_back("     alpha2=" + num(alpha2) + ", lambda=" + num(lambda) + ": min item exposure " + num(minima.back()));
  }
  bool ok = true;
  for (std::size_t k = 1; k < minima.size(); ++k) {
    const bool good = minima[k] >= minima[k - 1] - kLeximinTol;
    ok = ok && good;
    r.detail.push_back(check_line(good, "step " + std::to_string(k) + ": " + num(minima[k - 1]) + " -> " + num(minima[k])));
  }
  r.expected = "non-decreasing minimum exposure";
  r.observed = num(minima[0]) + ", " + num(minima[1]) + ", " + num(minima[2]);
  r.tolerance = num(kLeximinTol);
  r.passed = ok;
  finish(r, start);
  return r;
}

CriterionResult run_criterion(int id) {
  switch (id) {
    case 1: return criterion_prop2_limit();
    case 2: return criterion_leader_limits();
    case 3: return criterion_prop3_collapse();
    case 4: return criterion_micro_ratios();
    case 5: return criterion_fw_certificate();
    case 6: return criterion_gradient_gates();
    case 7: return criterion_oracle_vertices();
    case 8: return criterion_lorenz_toolkit();
    case 9: return criterion_regret_bound();
    case 10: return criterion_leximin_trend();
    default: throw Error(ErrorCode::BadParam, "criteria are numbered 1 to 10");
  }
}

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id));
  return out;
}

void print_results(std::ostream& os, const std::vector<CriterionResult>& results) {
  for (const CriterionResult& r : results) {
    char head[64];
    if (r.id > 0) {
      std::snprintf(head, sizeof head, "[%s] criterion %d: ", r.passed ? "PASS" : "FAIL", r.id);
    } else {
      std::snprintf(head, sizeof head, "[%s] ", r.passed ? "PASS" : "FAIL");
    }
    os << head << r.name << " | expected " << r.expected << " | observed " << r.observed << " | tol " << r.tolerance
       << " | " << num(r.runtime_ms) << " ms\n";
    for (const std::string& d : r.detail) os << "    " << d << '\n';
  }
}

}  // namespace fairrank::repro
