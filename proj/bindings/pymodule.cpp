#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "dtrank/boolfun.hpp"
#include "dtrank/catalog.hpp"
#include "dtrank/constructions.hpp"
#include "dtrank/dtree.hpp"
#include "dtrank/fourier.hpp"
#include "dtrank/games.hpp"
#include "dtrank/measures.hpp"
#include "dtrank/util.hpp"
#include "dtrank/verify.hpp"

namespace py = pybind11;

namespace {

using namespace dtrank;

ExactOptions options_for(int cap) {
  ExactOptions opts;
  if (cap > 0) opts.cap = cap;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_dtrank, m) {
  m.doc() = "Exact decision-tree complexity of Boolean functions";

  py::register_exception<CapExceeded>(m, "CapExceeded");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<BoolFun>(m, "BoolFun")
      .def_property_readonly("arity", &BoolFun::arity)
      .def("evaluate", &BoolFun::evaluate, py::arg("x"))
      .def("is_constant", &BoolFun::is_constant)
      .def("ones_count", &BoolFun::ones_count)
      .def("to_hex", &BoolFun::to_hex)
      .def("negated", &BoolFun::negated)
      .def("dual", &BoolFun::dual)
      .def("cofactor", &BoolFun::cofactor, py::arg("var"), py::arg("value"))
      .def("symmetric_profile",
           [](const BoolFun& f) -> std::optional<std::vector<int>> {
             const auto profile = f.symmetric_profile();
             if (!profile) return std::nullopt;
             return std::vector<int>(profile->values.begin(), profile->values.end());
           })
      .def("__eq__",
           [](const BoolFun& a, const BoolFun& b) { return a == b; },
           py::is_operator())
      .def("__hash__", &BoolFun::hash)
      .def("__repr__", [](const BoolFun& f) {
        return "BoolFun(arity=" + std::to_string(f.arity()) + ", hex='" + f.to_hex() +
               "')";
      });

  py::class_<DTree>(m, "DTree")
      .def("rank", &DTree::rank)
      .def("depth", &DTree::depth)
      .def("size", &DTree::size)
      .def("weighted_depth", &DTree::weighted_depth, py::arg("weights"))
      .def("eval", &DTree::eval, py::arg("x"))
      .def("computes", &DTree::computes, py::arg("f"))
      .def("to_json", [](const DTree& t) { return t.to_json().dump(); })
      .def("to_dot", &DTree::to_dot, py::arg("graph_name") = "dtree")
      .def_static("from_json",
                  [](const std::string& text) {
                    return DTree::from_json(nlohmann::json::parse(text));
                  },
                  py::arg("text"))
      .def("__repr__", [](const DTree& t) {
        return "DTree(rank=" + std::to_string(t.rank()) + ", depth=" +
               std::to_string(t.depth()) + ", size=" + std::to_string(t.size()) + ")";
      });

  m.def("parse", &parse_function, py::arg("expression"), py::arg("arity_cap") = kMaxArity,
        "Build a function from an expression such as 'MAJ:3' or "
        "'COMPOSE(AND:2;PARITY:2,PARITY:2)'.");
  m.def("from_hex", &BoolFun::from_hex, py::arg("arity"), py::arg("hex"));
  m.def("constant", &BoolFun::constant, py::arg("arity"), py::arg("value"));
  m.def("compose", &BoolFun::compose, py::arg("outer"), py::arg("inners"),
        py::arg("arity_cap") = kMaxArity);
  m.def("iterate", &BoolFun::iterate, py::arg("f"), py::arg("k"),
        py::arg("arity_cap") = kMaxArity);

  m.def("rank", [](const BoolFun& f, int cap) { return opt_rank(f, options_for(cap)).value; },
        py::arg("f"), py::arg("cap") = 0, "Minimum decision-tree rank (Strahler).");
  m.def("depth", [](const BoolFun& f, int cap) { return opt_depth(f, options_for(cap)).value; },
        py::arg("f"), py::arg("cap") = 0, "Minimum decision-tree depth.");
  m.def("dt_size", [](const BoolFun& f, int cap) { return opt_size(f, options_for(cap)).value; },
        py::arg("f"), py::arg("cap") = 0, "Minimum number of leaves.");
  m.def("weighted_depth",
        [](const BoolFun& f, const std::vector<int>& weights, int cap) {
          return opt_weighted_depth(f, weights, options_for(cap)).value;
        },
        py::arg("f"), py::arg("weights"), py::arg("cap") = 0,
        "Minimum weighted depth for per-variable query costs.");
  m.def("rank_tree",
        [](const BoolFun& f, int cap) { return opt_rank(f, options_for(cap)).witness; },
        py::arg("f"), py::arg("cap") = 0, "A rank-optimal decision tree.");
  m.def("depth_tree",
        [](const BoolFun& f, int cap) { return opt_depth(f, options_for(cap)).witness; },
        py::arg("f"), py::arg("cap") = 0, "A depth-optimal decision tree.");
  m.def("size_tree",
        [](const BoolFun& f, int cap) { return opt_size(f, options_for(cap)).witness; },
        py::arg("f"), py::arg("cap") = 0, "A size-optimal decision tree.");

  m.def("certificates",
        [](const BoolFun& f, int cap) {
          const CertStats cs = certificates(f, options_for(cap));
          py::dict d;
          d["c0"] = cs.c0;
          d["c1"] = cs.c1;
          d["c"] = cs.c;
          d["c_min"] = cs.c_min;
          d["c_avg"] = rational_string(cs.c_avg);
          return d;
        },
        py::arg("f"), py::arg("cap") = 0,
        "Certificate complexities; c_avg is an exact 'p/q' string.");
  m.def("gap",
        [](const BoolFun& f) -> std::optional<int> {
          const auto profile = f.symmetric_profile();
          if (!profile) return std::nullopt;
          return gap(*profile);
        },
        py::arg("f"), "Longest constant run of the profile (symmetric inputs only).");
  m.def("gap_min",
        [](const BoolFun& f) -> std::optional<int> {
          const auto profile = f.symmetric_profile();
          if (!profile) return std::nullopt;
          return gap_min(*profile);
        },
        py::arg("f"));

  m.def("sparsity", [](const BoolFun& f) { return wht(f).spar(); }, py::arg("f"),
        "Number of nonzero Fourier coefficients.");
  m.def("sparsity_tilde", [](const BoolFun& f) { return wht(f).spar_tilde(); },
        py::arg("f"));
  m.def("spectrum",
        [](const BoolFun& f) {
          const Spectrum s = wht(f);
          py::dict d;
          for (std::size_t mask = 0; mask < s.coeffs.size(); ++mask)
            if (s.coeffs[mask] != 0) d[py::int_(mask)] = s.coeffs[mask];
          return d;
        },
        py::arg("f"), "Nonzero scaled Fourier coefficients keyed by support mask.");

  m.def("cert_tree", [](const BoolFun& f, int cap) { return cert_tree(f, options_for(cap)); },
        py::arg("f"), py::arg("cap") = 0,
        "Tree of rank at most (C0-1)(C1-1)+1 built from certificates.");
  m.def("sparsity_tree",
        [](const BoolFun& f, int cap) { return sparsity_tree(f, options_for(cap)); },
        py::arg("f"), py::arg("cap") = 0,
        "Tree of depth at most Rank * (1 + log2 sparsity).");

  m.def("game_value", [](const BoolFun& f, int cap) { return game_value(f, options_for(cap)); },
        py::arg("f"), py::arg("cap") = 0,
        "Optimal prover-delayer score; equals the rank.");
  m.def("asym_game_value",
        [](const BoolFun& f, int cap) { return asym_game_value(f, options_for(cap)); },
        py::arg("f"), py::arg("cap") = 0,
        "Exact product value of the asymmetric game; equals the tree size.");
  m.def("play",
        [](const BoolFun& f) {
          auto prover = make_optimal_prover();
          auto delayer = make_optimal_delayer();
          return play(f, *prover, *delayer).to_json().dump();
        },
        py::arg("f"), "Play optimal prover vs optimal delayer; JSON transcript.");

  m.def("measure_report",
        [](const BoolFun& f, const std::optional<std::vector<int>>& weights) {
          return report_to_json(measure_report(f, weights)).dump();
        },
        py::arg("f"), py::arg("weights") = std::nullopt,
        "All measures of one function as a JSON string.");
  m.def("verify_exhaustive",
        [](int n) { return run_suite(Corpus::exhaustive(n)).to_json().dump(); },
        py::arg("n"), "Run every check over all functions of the given arity; JSON report.");
}
