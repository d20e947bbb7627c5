#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fairrank/analysis.hpp"
#include "fairrank/instances.hpp"
#include "fairrank/objectives.hpp"
#include "fairrank/repro.hpp"
#include "fairrank/solver.hpp"
#include "fairrank/utility.hpp"

namespace py = pybind11;
using namespace fairrank;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::InvalidDimensions, "expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0)), cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const Matrix& m) {
  return Array(std::vector<py::ssize_t>{static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())},
               m.values().data());
}

Array to_array(std::span<const double> v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

py::array_t<std::uint32_t> ranking_array(const DeterministicRanking& r) {
  return py::array_t<std::uint32_t>(
      std::vector<py::ssize_t>{static_cast<py::ssize_t>(r.n_users()), static_cast<py::ssize_t>(r.slots())},
      r.items().data());
}

py::dict profile_dict(const UtilityProfile& u) {
  py::dict d;
  d["users"] = to_array(u.users());
  d["items"] = to_array(u.items());
  return d;
}

py::dict report_dict(const LorenzReport& r) {
  py::dict d;
  d["curve"] = to_array(r.curve);
  d["gini"] = r.gini;
  d["std_dev"] = r.std_dev;
  d["total"] = r.total;
  py::dict q;
  for (const auto& [f, v] : r.quantile_cums) q[py::float_(f)] = v;
  d["quantile_cums"] = q;
  return d;
}

py::dict reference_dict(const ReferenceSolution& ref) {
  py::dict cases;
  for (const ReferenceCase& c : ref.cases) {
    py::dict d;
    d["regime"] = c.regime;
    d["profile"] = to_array(c.profile);
    d["total_user_utility"] = c.total_user_utility;
    d["ranking"] = c.ranking ? py::cast(*c.ranking) : py::none();
    cases[py::str(c.name)] = d;
  }
  py::dict out;
  out["description"] = ref.description;
  out["cases"] = cases;
  return out;
}

py::tuple generated(const GeneratedInstance& g) { return py::make_tuple(g.instance, reference_dict(g.reference)); }

}  // namespace

PYBIND11_MODULE(_fairrank, m) {
  m.doc() = "Two-sided fair rankings by welfare maximization with Frank-Wolfe";

  py::register_exception<Error>(m, "FairrankError", PyExc_ValueError);

  py::enum_<Mode>(m, "Mode")
      .value("ONE_SIDED", Mode::OneSided)
      .value("TWO_SIDED_PREFS", Mode::TwoSidedPrefs)
      .value("RECIPROCAL", Mode::Reciprocal);

  py::enum_<ProfileView>(m, "ProfileView").value("NATIVE", ProfileView::Native).value("EXPOSURE", ProfileView::Exposure);

  py::enum_<PenaltyKind>(m, "PenaltyKind")
      .value("QUALITY_WEIGHTED", PenaltyKind::QualityWeighted)
      .value("EQUAL_EXPOSURE", PenaltyKind::EqualExposure)
      .value("EQUAL_UTILITY", PenaltyKind::EqualUtility);

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def(py::init([](Mode mode, const Array& mu_user, std::vector<double> v, std::optional<Array> mu_item,
                       std::optional<std::pair<std::vector<std::vector<std::size_t>>, std::vector<std::vector<std::size_t>>>>
                           groups) {
             ProblemInstance inst;
             inst.mode = mode;
             inst.mu_user = to_matrix(mu_user);
             inst.exposure_weights = std::move(v);
             if (mu_item) inst.mu_item = to_matrix(*mu_item);
             if (groups) inst.groups = Groups{groups->first, groups->second};
             ensure_valid(inst);
             return inst;
           }),
           py::arg("mode"), py::arg("mu_user"), py::arg("exposure_weights"), py::arg("mu_item") = py::none(),
           py::arg("groups") = py::none())
      .def_readonly("mode", &ProblemInstance::mode)
      .def_property_readonly("mu_user", [](const ProblemInstance& i) { return to_array(i.mu_user); })
      .def_property_readonly("mu_item",
                             [](const ProblemInstance& i) -> py::object {
                               return i.mu_item ? py::object(to_array(*i.mu_item)) : py::object(py::none());
                             })
      .def_readonly("exposure_weights", &ProblemInstance::exposure_weights)
      .def_property_readonly("n_users", &ProblemInstance::n_users)
      .def_property_readonly("n_items", &ProblemInstance::n_items)
      .def_property_readonly("slots", &ProblemInstance::slots)
      .def("__eq__", [](const ProblemInstance& a, const ProblemInstance& b) { return a == b; })
      .def("__repr__", [](const ProblemInstance& i) {
        std::ostringstream os;
        os << "<ProblemInstance " << to_string(i.mode) << ' ' << i.n_users() << 'x' << i.n_items() << " K="
           << i.slots() << '>';
        return os.str();
      });

  py::class_<StochasticRanking>(m, "StochasticRanking")
      .def(py::init([](const std::vector<std::pair<double, py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>>>& atoms) {
             std::vector<Atom> out;
             for (const auto& [w, a] : atoms) {
               if (a.ndim() != 2) throw Error(ErrorCode::InvalidRanking, "each atom must be a users x slots array");
               const auto n = static_cast<std::size_t>(a.shape(0)), k = static_cast<std::size_t>(a.shape(1));
               out.push_back({w, DeterministicRanking(n, k, std::vector<std::uint32_t>(a.data(), a.data() + n * k))});
             }
             return StochasticRanking(std::move(out));
           }),
           py::arg("atoms"), "Atoms as (weight, users x slots array of 0-based item indices) pairs.")
      .def_property_readonly("n_users", &StochasticRanking::n_users)
      .def_property_readonly("slots", &StochasticRanking::slots)
      .def_property_readonly("atoms",
                             [](const StochasticRanking& r) {
                               py::list out;
                               for (const Atom& a : r.atoms()) out.append(py::make_tuple(a.weight, ranking_array(a.ranking)));
                               return out;
                             })
      .def("marginal_exposure",
           [](const StochasticRanking& r, const std::vector<double>& v, std::size_t i, std::size_t j) {
             return marginal_exposure(r, v, i, j);
           },
           py::arg("weights"), py::arg("user"), py::arg("item"));

  m.def(
      "utility_profile",
      [](const StochasticRanking& r, const ProblemInstance& inst, ProfileView view) {
        return profile_dict(utility_profile(r, inst, view));
      },
      py::arg("ranking"), py::arg("instance"), py::arg("view") = ProfileView::Native);

  m.def("utilitarian_ranking", [](const ProblemInstance& inst) {
    return StochasticRanking(utilitarian_ranking(inst));
  });

  py::class_<WelfareParams>(m, "WelfareParams")
      .def(py::init([](double lambda, double alpha1, double alpha2, double eta) {
             WelfareParams p{lambda, alpha1, alpha2, eta};
             p.validate();
             return p;
           }),
           py::arg("lam") = 0.5, py::arg("alpha1") = 0.0, py::arg("alpha2") = 0.0, py::arg("eta") = 1e-4)
      .def_readonly("lam", &WelfareParams::lambda)
      .def_readonly("alpha1", &WelfareParams::alpha1)
      .def_readonly("alpha2", &WelfareParams::alpha2)
      .def_readonly("eta", &WelfareParams::eta);

  py::class_<PenaltyParams>(m, "PenaltyParams")
      .def(py::init([](PenaltyKind kind, double beta, double sqrt_eps, bool normalize_by_n) {
             PenaltyParams p;
             p.kind = kind;
             p.beta = beta;
             p.sqrt_eps = sqrt_eps;
             p.normalize_by_n = normalize_by_n;
             p.validate();
             return p;
           }),
           py::arg("kind"), py::arg("beta"), py::arg("sqrt_eps") = 1e-12, py::arg("normalize_by_n") = true);

  py::class_<Objective>(m, "Objective")
      .def_property_readonly("name", &Objective::name)
      .def_property_readonly("params", &Objective::params)
      .def("__call__", [](const Objective& o, const std::vector<double>& values, std::size_t split) {
        const Evaluation e = o(UtilityProfile{values, split});
        return py::make_tuple(e.value, to_array(e.grad));
      });

  m.def("welfare_objective", &make_welfare_objective, py::arg("instance"), py::arg("params"));
  m.def("penalized_objective", &make_penalized_objective, py::arg("instance"), py::arg("params"));
  m.def("group_welfare_objective", &make_group_welfare_objective, py::arg("instance"), py::arg("params"));

  m.def(
      "solve",
      [](const ProblemInstance& inst, const Objective& obj, std::size_t iterations, std::optional<std::size_t> slots,
         std::optional<double> gap_tolerance, std::size_t trace_every, std::size_t threads) {
        SolverConfig cfg;
        cfg.iterations = iterations;
        cfg.slots = slots;
        cfg.gap_tolerance = gap_tolerance;
        cfg.trace_every = trace_every;
        cfg.threads = threads;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(inst, obj, cfg);
        }
        py::dict trace;
        std::vector<double> iter, objective, gap, gamma;
        for (const TraceRow& row : r.trace.rows) {
          iter.push_back(static_cast<double>(row.iter));
          objective.push_back(row.objective);
          gap.push_back(row.gap);
          gamma.push_back(row.gamma);
        }
        trace["iter"] = to_array(iter);
        trace["objective"] = to_array(objective);
        trace["gap"] = to_array(gap);
        trace["gamma"] = to_array(gamma);
        py::dict out;
        out["ranking"] = r.ranking;
        out["utilities"] = profile_dict(r.utilities);
        out["trace"] = trace;
        out["final_objective"] = r.trace.final_objective;
        out["final_gap"] = r.trace.final_gap;
        out["iterations"] = r.trace.iterations_run;
        return out;
      },
      py::arg("instance"), py::arg("objective"), py::arg("iterations") = 5000, py::arg("slots") = py::none(),
      py::arg("gap_tolerance") = py::none(), py::arg("trace_every") = 1, py::arg("threads") = 1);

  m.def("lorenz_curve", [](const std::vector<double>& u) { return to_array(lorenz_curve(u)); });
  m.def("gini", [](const std::vector<double>& u) { return gini(u); });
  m.def("std_dev", [](const std::vector<double>& u) { return std_dev(u); });
  m.def("dominance", [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::string(to_string(dominance(a, b)));
  });
  m.def("leximin_compare", [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::string(to_string(leximin_compare(a, b)));
  });
  m.def("lorenz_report", [](const std::vector<double>& u) { return report_dict(lorenz_report(u)); });

  m.def("gen_qw_counterexample", [](std::size_t d, std::size_t n) { return generated(gen_qw_counterexample(d, n)); },
        py::arg("d"), py::arg("n_blocks") = 1);
  m.def("gen_leader_star", [](std::size_t n) { return generated(gen_leader_star(n)); }, py::arg("n"));
  m.def("gen_pair_triangle", [](std::size_t n) { return generated(gen_pair_triangle(n)); }, py::arg("n"));
  m.def("gen_micro_example", [](std::size_t d, std::size_t n) { return generated(gen_micro_example(d, n)); },
        py::arg("d"), py::arg("n_blocks") = 1);
  m.def("gen_random", &gen_random, py::arg("n_users"), py::arg("n_items"), py::arg("mode"), py::arg("slots"),
        py::arg("seed"));

  m.def("load_instance", [](const std::string& path) { return load_instance(path); });
  m.def("save_instance", [](const ProblemInstance& inst, const std::string& path) { save_instance(inst, path); });

  m.def(
      "run_criterion",
      [](int id) {
        const repro::CriterionResult r = repro::run_criterion(id);
        py::dict d;
        d["id"] = r.id;
        d["name"] = r.name;
        d["expected"] = r.expected;
        d["observed"] = r.observed;
        d["tolerance"] = r.tolerance;
        d["passed"] = r.passed;
        d["detail"] = r.detail;
        return d;
      },
      py::arg("id"));
}
