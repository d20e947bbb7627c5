#include "fairrank/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fairrank/analysis.hpp"
#include "fairrank/instances.hpp"
#include "fairrank/objectives.hpp"
#include "fairrank/repro.hpp"
#include "fairrank/solver.hpp"
#include "fairrank/utility.hpp"

namespace fairrank::cli {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimensions:
    case ErrorCode::NegativePreference:
    case ErrorCode::NonMonotoneWeights:
    case ErrorCode::AsymmetricReciprocal:
    case ErrorCode::InvalidGroups:
    case ErrorCode::MissingItemPreferences:
      return kInvalidInstance;
    case ErrorCode::ParseError:
    case ErrorCode::IOError:
      return kInputOutput;
    case ErrorCode::UnknownFamily:
    case ErrorCode::BadParam:
      return kUsage;
    case ErrorCode::IncompatibleInstances:
      return kIncompatible;
    default:
      return kEvaluation;
  }
}

namespace {

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string key(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", f);
  return buf;
}

std::uint64_t fingerprint(const ProblemInstance& inst) {
  std::ostringstream os;
  write_instance(os, inst);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::IOError, "cannot write " + path.string());
  return os;
}

// ---- objective selection shared by solve and sweep ----

struct ObjectiveFlags {
  std::string kind = "welfare";
  double lambda = 0.5;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double eta = 1e-4;
  double beta = 0.0;
  double sqrt_eps = 1e-12;
  bool no_normalize = false;
};

void add_objective_flags(CLI::App* cmd, ObjectiveFlags& f, bool with_grid_params) {
  cmd->add_option("--objective", f.kind, "welfare | group-welfare | qua | expo | eq-util")
      ->check(CLI::IsMember({"welfare", "group-welfare", "qua", "expo", "eq-util"}))
      ->capture_default_str();
  if (!with_grid_params) {
    cmd->add_option("--lambda", f.lambda, "weight of the item side")->capture_default_str();
    cmd->add_option("--alpha1", f.alpha1, "user-side inequality aversion")->capture_default_str();
    cmd->add_option("--alpha2", f.alpha2, "item-side inequality aversion")->capture_default_str();
    cmd->add_option("--beta", f.beta, "penalty strength")->capture_default_str();
  }
  cmd->add_option("--eta", f.eta, "offset added to utilities inside psi")->capture_default_str();
  cmd->add_option("--sqrt-eps", f.sqrt_eps, "offset inside the penalty square root")->capture_default_str();
  cmd->add_flag("--no-normalize", f.no_normalize, "do not divide penalty deviations by the population size");
}

bool is_penalty(const std::string& kind) { return kind == "qua" || kind == "expo" || kind == "eq-util"; }

Objective build_objective(const ProblemInstance& inst, const ObjectiveFlags& f) {
  if (is_penalty(f.kind)) {
    PenaltyParams p;
    p.beta = f.beta;
    p.sqrt_eps = f.sqrt_eps;
    p.normalize_by_n = !f.no_normalize;
    p.kind = f.kind == "qua" ? PenaltyKind::QualityWeighted
             : f.kind == "expo" ? PenaltyKind::EqualExposure
                                : PenaltyKind::EqualUtility;
    return make_penalized_objective(inst, p);
  }
  const WelfareParams w{f.lambda, f.alpha1, f.alpha2, f.eta};
  if (f.kind == "group-welfare") return make_group_welfare_objective(inst, w);
  return make_welfare_objective(inst, w);
}

struct SolverFlags {
  std::size_t iterations = 5000;
  std::optional<std::size_t> slots;
  std::optional<double> gap_tol;
  std::size_t trace_every = 1;
  std::size_t threads = 1;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--iterations", s.iterations, "Frank-Wolfe iterations")->capture_default_str();
  cmd->add_option("--slots", s.slots, "number of slots K (defaults to the length of v)");
  cmd->add_option("--gap-tol", s.gap_tol, "stop once the duality gap falls below this value");
  cmd->add_option("--trace-every", s.trace_every, "record every n-th iteration")->capture_default_str();
  cmd->add_option("--threads", s.threads, "oracle worker threads")->capture_default_str();
}

SolverConfig to_config(const SolverFlags& s) {
  SolverConfig c;
  c.iterations = s.iterations;
  c.slots = s.slots;
  c.gap_tolerance = s.gap_tol;
  c.trace_every = s.trace_every;
  c.threads = s.threads;
  return c;
}

// Item side of the reports: native item utilities, or raw exposures when the
// instance is reciprocal (users are their own items there).
std::vector<double> item_side(const SolveResult& r, const ProblemInstance& inst) {
  if (inst.mode != Mode::Reciprocal) {
    auto items = r.utilities.items();
    return {items.begin(), items.end()};
  }
  const UtilityProfile e = utility_profile(r.ranking, inst, ProfileView::Exposure);
  auto items = e.items();
  return {items.begin(), items.end()};
}

std::vector<double> user_side(const SolveResult& r) {
  auto users = r.utilities.users();
  return {users.begin(), users.end()};
}

OrderedJson report_json(const LorenzReport& rep) {
  OrderedJson q;
  for (const auto& [f, v] : rep.quantile_cums) q[key(f)] = v;
  return OrderedJson{{"gini", rep.gini}, {"std_dev", rep.std_dev}, {"total", rep.total}, {"quantiles", q}};
}

void write_lorenz_csv(const fs::path& path, const LorenzReport& rep) {
  std::ofstream os = open_out(path);
  os << "index,cumulative_utility\n";
  for (std::size_t i = 0; i < rep.curve.size(); ++i) os << i + 1 << ',' << fmt17(rep.curve[i]) << '\n';
}

OrderedJson params_json(const Objective& obj) {
  OrderedJson p = OrderedJson::object();
  for (const auto& [k, v] : obj.params()) p[k] = v;
  return p;
}

// ---- generate ----

struct GenerateFlags {
  std::string family;
  std::optional<std::size_t> d, N, n, users, items, slots;
  std::optional<std::uint64_t> seed;
  std::string mode = "one-sided";
  std::string output;
};

ProblemInstance generate(const GenerateFlags& g) {
  auto need = [](const std::optional<std::size_t>& v, const char* flag, std::size_t fallback) {
    if (v && *v == 0) throw Error(ErrorCode::BadParam, std::string(flag) + " must be positive");
    return v.value_or(fallback);
  };
  if (g.family == "qw-counterexample") return gen_qw_counterexample(need(g.d, "--d", 2), need(g.N, "--N", 1)).instance;
  if (g.family == "leader-star") return gen_leader_star(need(g.n, "--n", 10)).instance;
  if (g.family == "pair-triangle") return gen_pair_triangle(need(g.n, "--n", 5)).instance;
  if (g.family == "micro") return gen_micro_example(need(g.d, "--d", 4), need(g.N, "--N", 1)).instance;
  if (g.family == "random") {
    if (!g.seed) throw Error(ErrorCode::BadParam, "random instances need an explicit --seed");
    Mode mode;
    try {
      mode = parse_mode(g.mode);
    } catch (const Error& e) {
      throw Error(ErrorCode::BadParam, e.message());
    }
    const std::size_t users = need(g.users, "--users", 50);
    const std::size_t items = need(g.items, "--items", mode == Mode::Reciprocal ? users : 100);
    return gen_random(users, items, mode, need(g.slots, "--slots", 10), *g.seed);
  }
  throw Error(ErrorCode::UnknownFamily, "unknown instance family '" + g.family +
                                            "' (qw-counterexample, leader-star, pair-triangle, micro, random)");
}

// ---- solve ----

struct SolveFlags {
  std::string input;
  std::string out_dir;
  bool timing = false;
};

OrderedJson summarize(const ProblemInstance& inst, const Objective& obj, const SolveResult& r,
                      const LorenzReport& users, const LorenzReport& items, double wall_ms) {
  OrderedJson quantiles;
  OrderedJson uq, iq;
  for (const auto& [f, v] : users.quantile_cums) uq[key(f)] = v;
  for (const auto& [f, v] : items.quantile_cums) iq[key(f)] = v;
  quantiles["users"] = uq;
  quantiles["items"] = iq;

  OrderedJson s;
  s["objective"] = obj.name();
  s["params"] = params_json(obj);
  s["total_user_utility"] = users.total;
  s["gini_users"] = users.gini;
  s["gini_items"] = items.gini;
  s["std_items"] = items.std_dev;
  s["quantile_cums"] = quantiles;
  s["final_gap"] = r.trace.final_gap;
  s["iterations"] = r.trace.iterations_run;
  s["wall_ms"] = wall_ms;
  s["final_objective"] = r.trace.final_objective;
  s["atoms"] = r.ranking.atoms().size();
  s["curvature_bound"] = r.trace.curvature_bound ? OrderedJson(*r.trace.curvature_bound) : OrderedJson(nullptr);
  s["utility_norm_bound"] = r.trace.utility_norm_bound;
  s["item_side"] = inst.mode == Mode::Reciprocal ? "exposure" : "utility";
  s["instance"] = {{"mode", to_string(inst.mode)},
                   {"n_users", inst.n_users()},
                   {"n_items", inst.n_items()},
                   {"slots", r.ranking.slots()},
                   {"fingerprint", hex(fingerprint(inst))}};
  s["lorenz"] = {{"users", report_json(users)}, {"items", report_json(items)}};
  return s;
}

int cmd_solve(const SolveFlags& f, const ObjectiveFlags& of, const SolverFlags& sf, std::ostream& out) {
  const ProblemInstance inst = load_instance(f.input);
  const Objective obj = build_objective(inst, of);
  const auto start = std::chrono::steady_clock::now();
  const SolveResult r = solve(inst, obj, to_config(sf));
  const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir(f.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IOError, "cannot create " + dir.string() + ": " + ec.message());

  {
    OrderedJson atoms = OrderedJson::array();
    for (const Atom& a : r.ranking.atoms()) {
      OrderedJson lists = OrderedJson::array();
      for (std::size_t i = 0; i < a.ranking.n_users(); ++i) {
        OrderedJson l = OrderedJson::array();
        for (std::uint32_t j : a.ranking.user(i)) l.push_back(j + 1);
        lists.push_back(std::move(l));
      }
      atoms.push_back({{"weight", a.weight}, {"rankings", std::move(lists)}});
    }
    OrderedJson doc{{"n_users", r.ranking.n_users()}, {"slots", r.ranking.slots()}, {"atoms", std::move(atoms)}};
    open_out(dir / "ranking.json") << doc.dump() << '\n';
  }

  const std::vector<double> users = user_side(r);
  const std::vector<double> items = item_side(r, inst);
  {
    std::ofstream os = open_out(dir / "utilities.csv");
    os << "side,index,utility\n";
    for (std::size_t i = 0; i < users.size(); ++i) os << "user," << i + 1 << ',' << fmt17(users[i]) << '\n';
    for (std::size_t j = 0; j < items.size(); ++j) os << "item," << j + 1 << ',' << fmt17(items[j]) << '\n';
  }
  const LorenzReport user_rep = lorenz_report(users);
  const LorenzReport item_rep = lorenz_report(items);
  write_lorenz_csv(dir / "lorenz_users.csv", user_rep);
  write_lorenz_csv(dir / "lorenz_items.csv", item_rep);
  {
    std::ofstream os = open_out(dir / "trace.csv");
    write_trace_csv(os, r.trace, f.timing);
  }
  open_out(dir / "summary.json") << summarize(inst, obj, r, user_rep, item_rep, wall_ms).dump(2) << '\n';

  out << obj.name() << ": total user utility " << fmt17(user_rep.total) << ", final gap " << fmt17(r.trace.final_gap)
      << ", " << r.ranking.atoms().size() << " atoms -> " << dir.string() << '\n';
  return kOk;
}

// ---- sweep ----

struct SweepFlags {
  std::string input;
  std::string output;
  std::vector<double> lambdas{0.5};
  std::vector<double> alpha1s{0.0};
  std::vector<double> alpha2s{0.0};
  std::vector<double> betas{0.0};
  std::string item_metric = "both";
};

int cmd_sweep(const SweepFlags& f, ObjectiveFlags of, const SolverFlags& sf, std::ostream& out) {
  const ProblemInstance inst = load_instance(f.input);
  const bool penalty = is_penalty(of.kind);
  if (penalty ? f.betas.empty() : (f.lambdas.empty() || f.alpha1s.empty() || f.alpha2s.empty())) {
    throw Error(ErrorCode::BadParam, "the parameter grid is empty");
  }
  const bool gini_col = f.item_metric != "std";
  const bool std_col = f.item_metric != "gini";
  const bool item_quantiles = inst.mode != Mode::Reciprocal;

  std::ofstream file;
  std::ostream* os = &out;
  if (!f.output.empty()) {
    file = open_out(f.output);
    os = &file;
  }
  *os << "objective,lambda,alpha1,alpha2,beta,total_user_utility,gini_users";
  if (gini_col) *os << ",gini_items";
  if (std_col) *os << ",std_items";
  *os << ",user_cum_10,user_cum_25,user_cum_50,item_cum_10,item_cum_25,item_cum_50,final_gap\n";

  std::vector<ObjectiveFlags> grid;
  if (penalty) {
    for (double b : f.betas) {
      ObjectiveFlags g = of;
      g.beta = b;
      grid.push_back(g);
    }
  } else {
    for (double l : f.lambdas) {
      for (double a1 : f.alpha1s) {
        for (double a2 : f.alpha2s) {
          ObjectiveFlags g = of;
          g.lambda = l;
          g.alpha1 = a1;
          g.alpha2 = a2;
          grid.push_back(g);
        }
      }
    }
  }

  for (const ObjectiveFlags& g : grid) {
    const SolveResult r = solve(inst, build_objective(inst, g), to_config(sf));
    const LorenzReport u = lorenz_report(user_side(r));
    const LorenzReport it = lorenz_report(item_side(r, inst));
    *os << g.kind << ',' << (penalty ? "" : fmt17(g.lambda)) << ',' << (penalty ? "" : fmt17(g.alpha1)) << ','
        << (penalty ? "" : fmt17(g.alpha2)) << ',' << (penalty ? fmt17(g.beta) : "") << ',' << fmt17(u.total) << ','
        << fmt17(u.gini);
    if (gini_col) *os << ',' << fmt17(it.gini);
    if (std_col) *os << ',' << fmt17(it.std_dev);
    for (std::size_t q = 0; q < 3; ++q) *os << ',' << fmt17(u.quantile_cums[q].second);
    for (std::size_t q = 0; q < 3; ++q) *os << ',' << (item_quantiles ? fmt17(it.quantile_cums[q].second) : "");
    *os << ',' << fmt17(r.trace.final_gap) << '\n';
  }
  return kOk;
}

// ---- compare ----

struct SideValues {
  std::vector<double> users;
  std::vector<double> items;
};

SideValues read_utilities(const fs::path& dir) {
  const fs::path path = dir / "utilities.csv";
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IOError, "cannot open " + path.string());
  SideValues v;
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(is, line) || line != "side,index,utility") {
    throw Error(ErrorCode::ParseError, path.string() + ": line 1: expected header side,index,utility");
  }
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto a = line.find(',');
    const auto b = a == std::string::npos ? a : line.find(',', a + 1);
    if (b == std::string::npos) {
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const std::string side = line.substr(0, a);
    double x = 0.0;
    try {
      x = std::stod(line.substr(b + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) + ": invalid utility");
    }
    if (side == "user") {
      v.users.push_back(x);
    } else if (side == "item") {
      v.items.push_back(x);
    } else {
      throw Error(ErrorCode::ParseError, path.string() + ": line " + std::to_string(line_no) + ": unknown side");
    }
  }
  return v;
}

std::string read_fingerprint(const fs::path& dir) {
  const fs::path path = dir / "summary.json";
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IOError, "cannot open " + path.string());
  try {
    const auto doc = nlohmann::json::parse(is);
    return doc.at("instance").at("fingerprint").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

int cmd_compare(const std::string& a, const std::string& b, std::ostream& out) {
  if (read_fingerprint(a) != read_fingerprint(b)) {
    throw Error(ErrorCode::IncompatibleInstances, "the two solutions were computed on different instances");
  }
  const SideValues va = read_utilities(a);
  const SideValues vb = read_utilities(b);
  if (va.users.size() != vb.users.size() || va.items.size() != vb.items.size()) {
    throw Error(ErrorCode::IncompatibleInstances, "the two solutions have different profile sizes");
  }
  const Dominance users = dominance(va.users, vb.users);
  const Dominance items = dominance(va.items, vb.items);
  auto strict = [](Dominance d) { return d == Dominance::StrictLorenz; };
  auto flipped = [](Dominance d) { return d == Dominance::Dominated || d == Dominance::Equal; };
  std::string joint = "incomparable";
  if (users == Dominance::Equal && items == Dominance::Equal) {
    joint = "equal";
  } else if (weakly_dominates(users) && weakly_dominates(items) && (strict(users) || strict(items))) {
    joint = "A dominates B";
  } else if (flipped(users) && flipped(items)) {
    joint = "B dominates A";
  }
  out << "users: " << to_string(users) << '\n';
  out << "items: " << to_string(items) << '\n';
  out << "lorenz-efficiency: " << joint << '\n';
  return kOk;
}

// ---- repro ----

struct ReproFlags {
  std::string which = "all";
  std::optional<std::size_t> d, N, n, iterations;
  std::optional<double> beta, sqrt_eps;
  std::optional<int> criterion;
};

int cmd_repro(const ReproFlags& f, std::ostream& out) {
  std::vector<repro::CriterionResult> results;
  const std::size_t iters = f.iterations.value_or(repro::kIterations);
  if (f.which == "prop2") {
    results.push_back(repro::prop2(f.d.value_or(10), f.beta.value_or(1e4), iters, f.sqrt_eps.value_or(repro::kProp2SqrtEps)));
  } else if (f.which == "prop3") {
    results.push_back(repro::prop3(f.n.value_or(5), iters));
  } else if (f.which == "leader") {
    results.push_back(repro::leader(f.n.value_or(10), f.beta.value_or(1e3), iters));
  } else if (f.which == "micro") {
    results.push_back(repro::micro(f.d.value_or(4), f.N.value_or(1)));
  } else if (f.which == "criterion") {
    if (!f.criterion) throw Error(ErrorCode::BadParam, "repro criterion needs --id");
    results.push_back(repro::run_criterion(*f.criterion));
  } else {
    results = repro::run_all();
  }
  repro::print_results(out, results);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  out << results.size() - failed << '/' << results.size() << " checks passed\n";
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-sided fair rankings by welfare maximization with Frank-Wolfe", "fairrank"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* g = app.add_subcommand("generate", "write a generated instance as a .fri file");
  g->add_option("family", gen.family, "qw-counterexample | leader-star | pair-triangle | micro | random")->required();
  g->add_option("--d", gen.d, "pattern size d");
  g->add_option("--N", gen.N, "number of pattern repetitions");
  g->add_option("--n", gen.n, "number of users (leader-star, pair-triangle)");
  g->add_option("--users", gen.users, "users (random)");
  g->add_option("--items", gen.items, "items (random)");
  g->add_option("--mode", gen.mode, "one-sided | two-sided-prefs | reciprocal (random)")->capture_default_str();
  g->add_option("--slots", gen.slots, "slots K (random)");
  g->add_option("--seed", gen.seed, "random seed (random)");
  g->add_option("-o,--output", gen.output, "output path (stdout when omitted)");

  SolveFlags sol;
  ObjectiveFlags sol_obj;
  SolverFlags sol_cfg;
  auto* s = app.add_subcommand("solve", "solve one configuration and write reports");
  s->add_option("--input", sol.input, ".fri instance")->required();
  s->add_option("--out", sol.out_dir, "output directory")->required();
  s->add_flag("--timing", sol.timing, "record wall time in trace.csv (otherwise 0, keeping runs identical)");
  add_objective_flags(s, sol_obj, false);
  add_solver_flags(s, sol_cfg);

  SweepFlags sw;
  ObjectiveFlags sw_obj;
  SolverFlags sw_cfg;
  auto* w = app.add_subcommand("sweep", "solve a parameter grid and print one CSV row per point");
  w->add_option("--input", sw.input, ".fri instance")->required();
  w->add_option("-o,--output", sw.output, "CSV path (stdout when omitted)");
  w->add_option("--lambdas", sw.lambdas, "comma-separated lambda values")->delimiter(',');
  w->add_option("--alpha1s", sw.alpha1s, "comma-separated alpha1 values")->delimiter(',');
  w->add_option("--alpha2s", sw.alpha2s, "comma-separated alpha2 values")->delimiter(',');
  w->add_option("--betas", sw.betas, "comma-separated beta values")->delimiter(',');
  w->add_option("--item-metric", sw.item_metric, "item inequality columns: gini | std | both")
      ->check(CLI::IsMember({"gini", "std", "both"}))
      ->capture_default_str();
  add_objective_flags(w, sw_obj, true);
  add_solver_flags(w, sw_cfg);

  std::string dir_a, dir_b;
  auto* c = app.add_subcommand("compare", "Lorenz dominance verdicts between two solve outputs");
  c->add_option("first", dir_a, "solution directory A")->required();
  c->add_option("second", dir_b, "solution directory B")->required();

  ReproFlags rep;
  auto* r = app.add_subcommand("repro", "rerun the limit checks and acceptance criteria");
  r->add_option("which", rep.which, "prop2 | prop3 | leader | micro | criterion | all")
      ->check(CLI::IsMember({"prop2", "prop3", "leader", "micro", "criterion", "all"}))
      ->capture_default_str();
  r->add_option("--d", rep.d, "pattern size d");
  r->add_option("--N", rep.N, "pattern repetitions");
  r->add_option("--n", rep.n, "number of users");
  r->add_option("--beta", rep.beta, "penalty strength");
  r->add_option("--sqrt-eps", rep.sqrt_eps, "penalty smoothing for prop2");
  r->add_option("--iterations", rep.iterations, "Frank-Wolfe iterations");
  r->add_option("--id", rep.criterion, "criterion number (1-10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) {
      const ProblemInstance inst = generate(gen);
      if (gen.output.empty()) {
        write_instance(out, inst);
      } else {
        save_instance(inst, gen.output);
      }
      return kOk;
    }
    if (*s) return cmd_solve(sol, sol_obj, sol_cfg, out);
    if (*w) return cmd_sweep(sw, sw_obj, sw_cfg, out);
    if (*c) return cmd_compare(dir_a, dir_b, out);
    if (*r) return cmd_repro(rep, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace fairrank::cli
