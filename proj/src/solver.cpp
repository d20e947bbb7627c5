#include "fairrank/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>
#include <unordered_map>

namespace fairrank {

void SolverConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::InvalidParameter, "iterations must be >= 1");
  if (slots && *slots < 1) throw Error(ErrorCode::InvalidParameter, "slots must be >= 1");
  if (trace_every < 1) throw Error(ErrorCode::InvalidParameter, "trace_every must be >= 1");
  if (threads < 1) throw Error(ErrorCode::InvalidParameter, "threads must be >= 1");
  if (gap_tolerance && !(*gap_tolerance >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "gap_tolerance must be >= 0");
  }
}

namespace {

// Item-side weight of the score: how much one unit of exposure of `item` to
// `user` moves the item-side profile components.
struct ScoreLayout {
  const ProblemInstance& inst;
  ProfileView view;
  std::span<const double> grad;

  double item_term(std::size_t user, std::size_t item) const {
    const std::size_t n_users = inst.n_users();
    if (inst.mode == Mode::Reciprocal && view == ProfileView::Native) {
      return grad[item] * inst.mu_user(item, user);
    }
    if (view == ProfileView::Exposure || inst.mode == Mode::OneSided) return grad[n_users + item];
    return grad[n_users + item] * (*inst.mu_item)(item, user);
  }
};

void rank_user(const ScoreLayout& layout, std::size_t user, std::size_t slots,
               std::vector<double>& scores, std::vector<std::uint32_t>& order,
               std::span<std::uint32_t> out) {
  const ProblemInstance& inst = layout.inst;
  const std::size_t n_items = inst.n_items();
  const bool skip_self = inst.mode == Mode::Reciprocal;
  const double g_user = layout.grad[user];
  auto mu_row = inst.mu_user.row(user);

  scores.resize(n_items);
  order.clear();
  for (std::size_t j = 0; j < n_items; ++j) {
    if (skip_self && j == user) continue;
    scores[j] = g_user * mu_row[j] + layout.item_term(user, j);
    order.push_back(static_cast<std::uint32_t>(j));
  }
  auto better = [&scores](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  if (slots < order.size()) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(slots), order.end(), better);
  }
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(slots), better);
  std::copy_n(order.begin(), slots, out.begin());
}

void check_slots(const ProblemInstance& inst, std::size_t slots) {
  if (slots < 1 || slots > inst.candidate_count()) {
    throw Error(ErrorCode::InvalidParameter,
                "slots must be between 1 and " + std::to_string(inst.candidate_count()));
  }
}

}  // namespace

DeterministicRanking linear_oracle(const ProblemInstance& inst, ProfileView view,
                                   std::span<const double> grad, std::size_t slots,
                                   std::size_t threads) {
  check_slots(inst, slots);
  if (grad.size() != profile_size(inst, view)) {
    throw Error(ErrorCode::DimensionMismatch, "gradient length does not match the profile");
  }
  for (std::size_t f = 0; f < grad.size(); ++f) {
    if (!std::isfinite(grad[f])) {
      throw Error(ErrorCode::NonFiniteGradient, "gradient component " + std::to_string(f + 1) + " is not finite");
    }
  }
  if (inst.mode == Mode::TwoSidedPrefs && view == ProfileView::Native && !inst.mu_item) {
    throw Error(ErrorCode::MissingItemPreferences, "two-sided-prefs instance without mu_item");
  }

  const std::size_t n_users = inst.n_users();
  DeterministicRanking out(n_users, slots);
  const ScoreLayout layout{inst, view, grad};

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scores;
    std::vector<std::uint32_t> order;
    order.reserve(inst.n_items());
    for (std::size_t i = begin; i < end; ++i) rank_user(layout, i, slots, scores, order, out.user(i));
  };

  const std::size_t workers = std::min(threads, n_users);
  if (workers <= 1) {
    work(0, n_users);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n_users + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n_users, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  for (auto& t : pool) t.join();
  return out;
}

DeterministicRanking utilitarian_ranking(const ProblemInstance& inst, std::size_t slots) {
  ensure_valid(inst);
  std::vector<double> ones(profile_size(inst, ProfileView::Native), 1.0);
  return linear_oracle(inst, ProfileView::Native, ones, slots);
}

DeterministicRanking utilitarian_ranking(const ProblemInstance& inst) {
  return utilitarian_ranking(inst, inst.slots());
}

double utility_norm_bound(const ProblemInstance& inst, ProfileView view, std::size_t slots) {
  const std::size_t n_users = inst.n_users();
  const std::size_t n_items = inst.n_items();
  const double v1 = inst.exposure_weights.empty() ? 0.0 : inst.exposure_weights.front();
  const std::size_t depth = std::min(slots, inst.exposure_weights.size());

  std::vector<double> user_max(n_users, 0.0);
  std::vector<double> sorted;
  for (std::size_t i = 0; i < n_users; ++i) {
    auto row = inst.mu_user.row(i);
    sorted.assign(row.begin(), row.end());
    if (inst.mode == Mode::Reciprocal) sorted.erase(sorted.begin() + static_cast<std::ptrdiff_t>(i));
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t k = 0; k < depth && k < sorted.size(); ++k) {
      user_max[i] += inst.exposure_weights[k] * sorted[k];
    }
  }
  // An item occupies at most one slot per user, so at most v_1 per user.
  std::vector<double> item_max(n_items, 0.0);
  for (std::size_t j = 0; j < n_items; ++j) {
    for (std::size_t i = 0; i < n_users; ++i) {
      if (inst.mode == Mode::Reciprocal && i == j) continue;
      double w = 1.0;
      if (view == ProfileView::Native && inst.mode != Mode::OneSided) w = inst.item_preference(j, i);
      item_max[j] += v1 * w;
    }
  }

  double total = 0.0;
  if (inst.mode == Mode::Reciprocal && view == ProfileView::Native) {
    for (std::size_t i = 0; i < n_users; ++i) total += (user_max[i] + item_max[i]) * (user_max[i] + item_max[i]);
    return total;
  }
  for (double x : user_max) total += x * x;
  for (double x : item_max) total += x * x;
  return total;
}

namespace {

Evaluation evaluate(const Objective& objective, const UtilityProfile& u) {
  Evaluation e;
  try {
    e = objective(u);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(ErrorCode::ObjectiveEvaluationFailure, objective.name() + ": " + ex.what());
  }
  if (!std::isfinite(e.value)) {
    throw Error(ErrorCode::ObjectiveEvaluationFailure, objective.name() + " returned a non-finite value");
  }
  if (e.grad.size() != u.size()) {
    throw Error(ErrorCode::DimensionMismatch, objective.name() + " gradient length does not match the profile");
  }
  return e;
}

double linear_gap(std::span<const double> grad, std::span<const double> vertex,
                  std::span<const double> current) {
  double g = 0.0;
  for (std::size_t f = 0; f < grad.size(); ++f) g += grad[f] * (vertex[f] - current[f]);
  return g;
}

ProblemInstance with_slots(const ProblemInstance& inst, std::size_t slots) {
  if (slots > inst.slots()) {
    throw Error(ErrorCode::InvalidParameter, "slots exceeds the length of the exposure weights");
  }
  ProblemInstance out = inst;
  out.exposure_weights.resize(slots);
  return out;
}

}  // namespace

SolveResult solve(const ProblemInstance& input, const Objective& objective, const SolverConfig& config) {
  config.validate();
  ensure_valid(input);
  const std::size_t slots = config.slots.value_or(input.slots());
  const ProblemInstance inst = with_slots(input, slots);
  check_slots(inst, slots);

  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const ProfileView view = objective.view();

  SolverTrace trace;
  trace.curvature_bound = objective.curvature_bound();
  trace.utility_norm_bound = utility_norm_bound(inst, view, slots);

  // Atom added at iteration s (s = 0 is the start) ends with weight
  // 2(s+1) / ((T+1)(T+2)); numerators are accumulated exactly.
  std::vector<DeterministicRanking> vertices;
  std::vector<std::uint64_t> numerators;
  std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
  auto add_vertex = [&](DeterministicRanking r, std::uint64_t numerator) {
    auto& bucket = by_hash[r.hash()];
    for (std::size_t idx : bucket) {
      if (vertices[idx] == r) {
        numerators[idx] += numerator;
        return;
      }
    }
    bucket.push_back(vertices.size());
    vertices.push_back(std::move(r));
    numerators.push_back(numerator);
  };

  DeterministicRanking start_vertex = utilitarian_ranking(inst, slots);
  UtilityProfile u = utility_profile(start_vertex, inst, view);
  add_vertex(std::move(start_vertex), 2);

  std::size_t t = 1;
  for (; t <= config.iterations; ++t) {
    const Evaluation e = evaluate(objective, u);
    DeterministicRanking vertex = linear_oracle(inst, view, e.grad, slots, config.threads);
    const UtilityProfile u_vertex = utility_profile(vertex, inst, view);
    const double gap = linear_gap(e.grad, u_vertex.values, u.values);
    const double gamma = 2.0 / (static_cast<double>(t) + 2.0);

    const bool stop = config.gap_tolerance && gap <= *config.gap_tolerance;
    if (t % config.trace_every == 0 || t == config.iterations || stop) {
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      trace.rows.push_back({t, e.value, gap, gamma, ms});
    }
    if (stop) break;

    for (std::size_t f = 0; f < u.size(); ++f) {
      u.values[f] = (1.0 - gamma) * u.values[f] + gamma * u_vertex.values[f];
    }
    add_vertex(std::move(vertex), 2 * static_cast<std::uint64_t>(t + 1));
  }
  const std::size_t run = std::min(t, config.iterations + 1) - 1;
  trace.iterations_run = run;

  const double denom = static_cast<double>((run + 1) * (run + 2));
  std::vector<Atom> atoms;
  atoms.reserve(vertices.size());
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    atoms.push_back({static_cast<double>(numerators[a]) / denom, std::move(vertices[a])});
  }

  SolveResult result;
  result.ranking = StochasticRanking(std::move(atoms));

  const UtilityProfile u_final = utility_profile(result.ranking, inst, view);
  const Evaluation e_final = evaluate(objective, u_final);
  const DeterministicRanking v_final = linear_oracle(inst, view, e_final.grad, slots, config.threads);
  trace.final_objective = e_final.value;
  trace.final_gap = linear_gap(e_final.grad, utility_profile(v_final, inst, view).values, u_final.values);

  result.utilities = view == ProfileView::Native ? u_final
                                                 : utility_profile(result.ranking, inst, ProfileView::Native);
  result.trace = std::move(trace);
  return result;
}

void write_trace_csv(std::ostream& os, const SolverTrace& trace, bool timing) {
  os << "iter,objective,gap,gamma,elapsed_ms\n";
  char buf[160];
  for (const TraceRow& r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.3f\n", r.iter, r.objective, r.gap, r.gamma,
                  timing ? r.elapsed_ms : 0.0);
    os << buf;
  }
}

}  // namespace fairrank
