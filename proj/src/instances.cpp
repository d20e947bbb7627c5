#include "fairrank/instances.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairrank/utility.hpp"

namespace fairrank {

const ReferenceCase& ReferenceSolution::at(const std::string& name) const {
  for (const auto& c : cases) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::BadParam, "no reference case named '" + name + "'");
}

namespace {

using PerUser = std::vector<std::vector<std::pair<double, std::vector<std::uint32_t>>>>;

ProblemInstance single_slot(Mode mode, Matrix mu) {
  ProblemInstance inst;
  inst.mode = mode;
  inst.mu_user = std::move(mu);
  inst.exposure_weights = {1.0};
  return inst;
}

ReferenceCase make_case(const ProblemInstance& inst, std::string name, std::string regime,
                        StochasticRanking ranking) {
  ReferenceCase c;
  c.name = std::move(name);
  c.regime = std::move(regime);
  const UtilityProfile u = utility_profile(ranking, inst);
  c.profile = u.values;
  for (double x : u.users()) c.total_user_utility += x;
  c.ranking = std::move(ranking);
  return c;
}

// Within each block of m users over m items, user k of the block gets item
// (k + shift) mod m.
DeterministicRanking block_shift(std::size_t m, std::size_t n_blocks, std::size_t shift) {
  DeterministicRanking r(m * n_blocks, 1);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t k = 0; k < m; ++k) r.user(b * m + k)[0] = static_cast<std::uint32_t>((k + shift) % m);
  }
  return r;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::BadParam, message);
}

}  // namespace

double qw_limit_p(std::size_t d) {
  const double x = static_cast<double>(d);
  return (x + 1.0) / x * (x + 2.0) / (3.0 * x + 2.0) - 1.0 / x;
}

GeneratedInstance gen_qw_counterexample(std::size_t d, std::size_t n_blocks) {
  require(d >= 1, "d must be >= 1");
  require(n_blocks >= 1, "N must be >= 1");
  const std::size_t m = d + 1;
  Matrix mu(m * n_blocks, m);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t k = 0; k < m; ++k) {
      mu(b * m + k, k) = 1.0;
      if (k < d) mu(b * m + k, d) = 0.5;
    }
  }
  GeneratedInstance g{single_slot(Mode::OneSided, std::move(mu)), {}};
  g.reference.description = "quality-weighted exposure counterexample, d=" + std::to_string(d) +
                            ", N=" + std::to_string(n_blocks);
  g.reference.cases.push_back(
      make_case(g.instance, "welfare", "welfare optimum, every strictly concave theta",
                StochasticRanking(block_shift(m, n_blocks, 0))));

  // Pattern users move mass p to the shared item j_{d+1}.
  const double p = qw_limit_p(d);
  DeterministicRanking shared(m * n_blocks, 1);
  for (std::size_t i = 0; i < m * n_blocks; ++i) shared.user(i)[0] = static_cast<std::uint32_t>(d);
  std::vector<Atom> atoms{{1.0 - p, block_shift(m, n_blocks, 0)}, {p, std::move(shared)}};
  g.reference.cases.push_back(
      make_case(g.instance, "qua-limit", "quality-weighted penalty, beta -> inf", StochasticRanking(std::move(atoms))));
  return g;
}

GeneratedInstance gen_leader_star(std::size_t n) {
  require(n >= 3, "n must be >= 3");
  Matrix mu(n, n);
  for (std::size_t j = 1; j < n; ++j) {
    mu(0, j) = 1.0;
    mu(j, 0) = 1.0;
  }
  GeneratedInstance g{single_slot(Mode::Reciprocal, std::move(mu)), {}};
  g.reference.description = "reciprocal leader star, n=" + std::to_string(n);
  const double others = static_cast<double>(n - 1);

  {
    std::vector<Atom> atoms;
    for (std::size_t s = 1; s < n; ++s) {
      DeterministicRanking r(n, 1);
      r.user(0)[0] = static_cast<std::uint32_t>(s);
      for (std::size_t i = 1; i < n; ++i) r.user(i)[0] = 0;
      atoms.push_back({1.0 / others, std::move(r)});
    }
    g.reference.cases.push_back(make_case(g.instance, "welfare", "welfare optimum, every strictly concave theta",
                                          StochasticRanking(std::move(atoms))));
  }
  {
    std::vector<Atom> atoms;
    for (std::size_t s = 1; s < n; ++s) {
      DeterministicRanking r(n, 1);
      for (std::size_t i = 0; i < n; ++i) r.user(i)[0] = static_cast<std::uint32_t>((i + s) % n);
      atoms.push_back({1.0 / others, std::move(r)});
    }
    g.reference.cases.push_back(make_case(g.instance, "expo-limit", "equal-exposure penalty, beta -> inf",
                                          StochasticRanking(std::move(atoms))));
  }
  {
    PerUser per_user(n);
    for (std::size_t j = 1; j < n; ++j) per_user[0].push_back({1.0 / others, {static_cast<std::uint32_t>(j)}});
    const double to_leader = static_cast<double>(n) / (2.0 * others);
    const double elsewhere = 1.0 / (2.0 * others);
    for (std::size_t i = 1; i < n; ++i) {
      per_user[i].push_back({to_leader, {0}});
      for (std::size_t j = 1; j < n; ++j) {
        if (j != i) per_user[i].push_back({elsewhere, {static_cast<std::uint32_t>(j)}});
      }
    }
    g.reference.cases.push_back(make_case(g.instance, "qua-limit", "quality-weighted penalty, beta -> inf",
                                          StochasticRanking::from_per_user(per_user)));
  }
  return g;
}

GeneratedInstance gen_pair_triangle(std::size_t n) {
  require(n >= 5, "n must be >= 5");
  Matrix mu(n, n);
  auto link = [&mu](std::size_t a, std::size_t b) {
    mu(a, b) = 1.0;
    mu(b, a) = 1.0;
  };
  link(0, 1);
  link(0, 2);
  for (std::size_t a = 3; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) link(a, b);
  }
  GeneratedInstance g{single_slot(Mode::Reciprocal, std::move(mu)), {}};
  g.reference.description = "reciprocal pair/triangle, n=" + std::to_string(n);

  PerUser per_user(n);
  per_user[0] = {{0.5, {1}}, {0.5, {2}}};
  per_user[1] = {{1.0, {0}}};
  per_user[2] = {{1.0, {0}}};
  const double clique_peers = static_cast<double>(n - 4);
  for (std::size_t a = 3; a < n; ++a) {
    for (std::size_t b = 3; b < n; ++b) {
      if (a != b) per_user[a].push_back({1.0 / clique_peers, {static_cast<std::uint32_t>(b)}});
    }
  }
  g.reference.cases.push_back(make_case(g.instance, "welfare", "welfare optimum, every strictly concave theta",
                                        StochasticRanking::from_per_user(per_user)));

  ReferenceCase collapse;
  collapse.name = "eq-util-limit";
  collapse.regime = "equal-utility penalty, beta -> inf";
  collapse.profile.assign(n, 0.0);
  g.reference.cases.push_back(std::move(collapse));
  return g;
}

GeneratedInstance gen_micro_example(std::size_t d, std::size_t n_blocks) {
  require(d >= 1, "d must be >= 1");
  require(n_blocks >= 1, "N must be >= 1");
  const std::size_t m = d + 1;
  const double off = 1.0 / static_cast<double>(d);
  Matrix mu(m * n_blocks, m);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < m; ++j) mu(b * m + k, j) = j == k ? 1.0 : off;
    }
  }
  GeneratedInstance g{single_slot(Mode::OneSided, std::move(mu)), {}};
  g.reference.description = "per-ranking constraints, d=" + std::to_string(d) + ", N=" + std::to_string(n_blocks);
  g.reference.cases.push_back(make_case(g.instance, "global", "welfare optimum, every strictly concave theta",
                                        StochasticRanking(block_shift(m, n_blocks, 0))));

  // Every single ranking gives each item exposure 1 / (d+1).
  std::vector<Atom> uniform;
  for (std::size_t s = 0; s < m; ++s) uniform.push_back({1.0 / static_cast<double>(m), block_shift(m, n_blocks, s)});
  g.reference.cases.push_back(make_case(g.instance, "per-ranking-expo", "equal exposure within every ranking",
                                        StochasticRanking(std::move(uniform))));

  // Exposure proportional to mu_ij within every ranking: the favourite item
  // gets 1/2 and each other item 1/(2d), since sum_j mu_ij = 2.
  std::vector<Atom> weighted{{0.5, block_shift(m, n_blocks, 0)}};
  for (std::size_t s = 1; s < m; ++s) weighted.push_back({0.5 * off, block_shift(m, n_blocks, s)});
  g.reference.cases.push_back(make_case(g.instance, "per-ranking-qua",
                                        "quality-weighted exposure within every ranking",
                                        StochasticRanking(std::move(weighted))));
  return g;
}

std::vector<double> dcg_weights(std::size_t slots) {
  std::vector<double> v(slots);
  for (std::size_t k = 0; k < slots; ++k) v[k] = 1.0 / std::log2(static_cast<double>(k) + 2.0);
  return v;
}

ProblemInstance gen_random(std::size_t n_users, std::size_t n_items, Mode mode, std::size_t slots,
                           std::uint64_t seed) {
  require(n_users >= 1 && n_items >= 1, "sizes must be >= 1");
  if (mode == Mode::Reciprocal) require(n_users == n_items, "reciprocal instances need users == items");
  std::mt19937_64 rng(seed);
  // 53 random bits per draw, identical on every platform.
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  ProblemInstance inst;
  inst.mode = mode;
  inst.mu_user = Matrix(n_users, n_items);
  if (mode == Mode::Reciprocal) {
    for (std::size_t i = 0; i < n_users; ++i) {
      for (std::size_t j = i + 1; j < n_items; ++j) {
        const double x = uniform();
        inst.mu_user(i, j) = x;
        inst.mu_user(j, i) = x;
      }
    }
  } else {
    for (std::size_t i = 0; i < n_users; ++i) {
      for (std::size_t j = 0; j < n_items; ++j) inst.mu_user(i, j) = uniform();
    }
  }
  if (mode == Mode::TwoSidedPrefs) {
    Matrix item(n_items, n_users);
    for (std::size_t j = 0; j < n_items; ++j) {
      for (std::size_t i = 0; i < n_users; ++i) item(j, i) = uniform();
    }
    inst.mu_item = std::move(item);
  }
  require(slots >= 1 && slots <= inst.candidate_count(),
          "slots must be between 1 and " + std::to_string(inst.candidate_count()));
  inst.exposure_weights = dcg_weights(slots);
  return inst;
}

// ---- .fri ----

namespace {

using OrderedJson = nlohmann::ordered_json;

void write_rows(std::ostream& os, const Matrix& m) {
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

OrderedJson groups_json(const std::vector<std::vector<std::size_t>>& sets) {
  OrderedJson out = OrderedJson::array();
  for (const auto& s : sets) {
    OrderedJson g = OrderedJson::array();
    for (std::size_t x : s) g.push_back(x + 1);
    out.push_back(std::move(g));
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& message) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& message) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message);
}

const OrderedJson& require_key(const OrderedJson& header, const char* key) {
  auto it = header.find(key);
  if (it == header.end()) parse_fail(1, std::string("missing header key '") + key + "'");
  return *it;
}

std::size_t require_count(const OrderedJson& header, const char* key) {
  const OrderedJson& v = require_key(header, key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    parse_fail(1, std::string("header key '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::vector<std::size_t>> parse_groups(const OrderedJson& g, const char* side) {
  std::vector<std::vector<std::size_t>> out;
  if (!g.is_array()) parse_fail(1, std::string("groups.") + side + " must be an array of arrays");
  for (const auto& set : g) {
    if (!set.is_array()) parse_fail(1, std::string("groups.") + side + " must be an array of arrays");
    std::vector<std::size_t> members;
    for (const auto& x : set) {
      if (!x.is_number_unsigned() || x.get<std::size_t>() == 0) {
        parse_fail(1, std::string("groups.") + side + " entries must be 1-based indices");
      }
      members.push_back(x.get<std::size_t>() - 1);
    }
    out.push_back(std::move(members));
  }
  return out;
}

bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

Matrix read_block(std::istream& is, std::size_t& line_no, std::size_t rows, std::size_t cols,
                  const std::string& block) {
  Matrix m(rows, cols);
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    ++line_no;
    if (!next_line(is, line)) {
      parse_fail(line_no, block + " row " + std::to_string(r + 1) + " is missing (expected " +
                              std::to_string(rows) + " rows)");
    }
    std::size_t c = 0;
    std::size_t pos = 0;
    while (true) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      if (c >= cols) {
        parse_fail(line_no, block + " row " + std::to_string(r + 1) + " has more than " + std::to_string(cols) +
                                " values");
      }
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      while (first < last && *first == ' ') ++first;
      while (last > first && last[-1] == ' ') --last;
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last || first == last) {
        parse_fail(line_no, pos + 1, "invalid number '" + std::string(line, pos, end - pos) + "' in " + block +
                                         " row " + std::to_string(r + 1));
      }
      m(r, c++) = value;
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (c != cols) {
      parse_fail(line_no, block + " row " + std::to_string(r + 1) + " has " + std::to_string(c) +
                              " values, expected " + std::to_string(cols));
    }
  }
  return m;
}

}  // namespace

void write_instance(std::ostream& os, const ProblemInstance& inst) {
  OrderedJson header;
  header["format"] = "fri";
  header["version"] = 1;
  header["mode"] = to_string(inst.mode);
  header["n_users"] = inst.n_users();
  header["n_items"] = inst.n_items();
  header["v"] = inst.exposure_weights;
  if (inst.groups) {
    OrderedJson g;
    g["users"] = groups_json(inst.groups->users);
    g["items"] = groups_json(inst.groups->items);
    header["groups"] = std::move(g);
  }
  os << header.dump() << '\n';
  write_rows(os, inst.mu_user);
  if (inst.mu_item) write_rows(os, *inst.mu_item);
}

ProblemInstance read_instance(std::istream& is) {
  std::string line;
  if (!next_line(is, line)) parse_fail(1, "empty input, expected a JSON header");
  OrderedJson header;
  try {
    header = OrderedJson::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(1, e.byte, "header is not valid JSON");
  }
  if (!header.is_object()) parse_fail(1, "header must be a JSON object");
  const OrderedJson& format = require_key(header, "format");
  if (format != "fri") parse_fail(1, "header key 'format' must be \"fri\"");
  const OrderedJson& version = require_key(header, "version");
  if (version != 1) parse_fail(1, "unsupported version " + version.dump());

  ProblemInstance inst;
  const OrderedJson& mode = require_key(header, "mode");
  if (!mode.is_string()) parse_fail(1, "header key 'mode' must be a string");
  try {
    inst.mode = parse_mode(mode.get<std::string>());
  } catch (const Error& e) {
    parse_fail(1, e.message());
  }
  const std::size_t n_users = require_count(header, "n_users");
  const std::size_t n_items = require_count(header, "n_items");
  const OrderedJson& v = require_key(header, "v");
  if (!v.is_array() || v.empty()) parse_fail(1, "header key 'v' must be a non-empty array of numbers");
  for (const auto& x : v) {
    if (!x.is_number()) parse_fail(1, "header key 'v' must be a non-empty array of numbers");
    inst.exposure_weights.push_back(x.get<double>());
  }
  if (auto it = header.find("groups"); it != header.end()) {
    if (!it->is_object()) parse_fail(1, "header key 'groups' must be an object");
    Groups g;
    if (auto u = it->find("users"); u != it->end()) g.users = parse_groups(*u, "users");
    if (auto i = it->find("items"); i != it->end()) g.items = parse_groups(*i, "items");
    inst.groups = std::move(g);
  }

  std::size_t line_no = 1;
  inst.mu_user = read_block(is, line_no, n_users, n_items, "mu_user");
  if (inst.mode == Mode::TwoSidedPrefs) inst.mu_item = read_block(is, line_no, n_items, n_users, "mu_item");
  while (next_line(is, line)) {
    ++line_no;
    if (!line.empty()) parse_fail(line_no, "unexpected data after the last matrix row");
  }
  ensure_valid(inst);
  return inst;
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOError, "cannot open " + path.string());
  try {
    return read_instance(in);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw Error(ErrorCode::ParseError, path.string() + ": " + e.message());
    throw;
  }
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  ensure_valid(inst);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IOError, "cannot write " + path.string());
  write_instance(out, inst);
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path.string());
}

}  // namespace fairrank
