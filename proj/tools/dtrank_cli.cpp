#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
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

namespace {

using namespace dtrank;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFail = 2;
constexpr int kBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-")
    std::cout << contents << (contents.ends_with('\n') ? "" : "\n");
  else
    write_file(path, contents);
}

//! Common function-selection flags: an expression or a truth-table file.
struct FnInput {
  std::string expr_text;
  std::string tt_path;

  void attach(CLI::App* cmd, bool required = true) {
    auto* fn = cmd->add_option("--fn", expr_text, "function expression (e.g. MAJ:3)");
    auto* tt = cmd->add_option("--tt", tt_path, "truth-table file (n=<arity> + hex)");
    fn->excludes(tt);
    if (required) {
      // CLI11 cannot express "exactly one of"; enforced in resolve()
      cmd->callback([this, cmd] {
        if (cmd->count("--fn") == 0 && cmd->count("--tt") == 0)
          throw CLI::RequiredError("--fn or --tt");
      });
    }
  }

  BoolFun resolve() const {
    if (!tt_path.empty()) return from_tt_file(read_file(tt_path));
    return parse_function(expr_text);
  }
  std::optional<FnExpr> expression() const {
    if (expr_text.empty()) return std::nullopt;
    return parse_expression(expr_text);
  }
};

std::string describe(const MeasureReport& r) {
  std::ostringstream out;
  out << "function        TT:" << r.hex << ":" << r.arity << "\n";
  out << "rank            " << r.rank << "\n";
  out << "depth           " << r.depth << "\n";
  out << "size            " << r.size << "\n";
  if (r.weighted_depth) {
    out << "weighted depth  " << *r.weighted_depth << " (weights";
    for (int w : *r.weights) out << " " << w;
    out << ")\n";
  }
  out << "certificates    C0 " << r.cert.c0 << ", C1 " << r.cert.c1 << ", C "
      << r.cert.c << ", C_min " << r.cert.c_min << ", C_avg "
      << rational_string(r.cert.c_avg) << "\n";
  out << "kill            " << r.kill << "\n";
  out << "sparsity        " << r.spar << " (reduced " << r.spar_tilde << ")\n";
  if (r.gap) out << "gap             " << *r.gap << " (min " << *r.gap_min << ")\n";
  return out.str();
}

int run_measure(const FnInput& input, const std::vector<int>& weights, bool as_json) {
  const BoolFun f = input.resolve();
  const std::optional<std::vector<int>> w =
      weights.empty() ? std::nullopt : std::make_optional(weights);
  const MeasureReport report = measure_report(f, w);
  if (as_json)
    std::cout << report_to_json(report).dump(2) << "\n";
  else
    std::cout << describe(report);
  return kOk;
}

int run_table1(int n, bool as_json) {
  const std::vector<ClosedFormRow> rows = closed_form_rows(n);
  nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
  std::ostringstream out;
  out << std::left << std::setw(14) << "name" << std::right << std::setw(7) << "depth"
      << std::setw(5) << "C0" << std::setw(5) << "C1" << std::setw(5) << "C"
      << std::setw(5) << "Gap" << std::setw(6) << "Rank" << "\n";
  int mismatches = 0;
  for (const ClosedFormRow& row : rows) {
    const BoolFun f = row.expression.empty()
                          ? BoolFun::constant(n, row.name == "CONST_1")
                          : parse_function(row.expression);
    const MeasureReport m = measure_report(f);
    const bool match = m.depth == row.depth && m.cert.c0 == row.c0 &&
                       m.cert.c1 == row.c1 && m.cert.c == row.c &&
                       m.gap.value_or(-1) == row.gap && m.rank == row.rank;
    if (!match) ++mismatches;
    out << std::left << std::setw(14) << row.name << std::right << std::setw(7)
        << m.depth << std::setw(5) << m.cert.c0 << std::setw(5) << m.cert.c1
        << std::setw(5) << m.cert.c << std::setw(5) << m.gap.value_or(-1)
        << std::setw(6) << m.rank << (match ? "" : "  MISMATCH") << "\n";
    if (!match)
      out << "  closed form: depth " << row.depth << ", C0 " << row.c0 << ", C1 "
          << row.c1 << ", C " << row.c << ", Gap " << row.gap << ", Rank "
          << row.rank << "\n";
    nlohmann::ordered_json jr;
    jr["name"] = row.name;
    jr["depth"] = m.depth;
    jr["c0"] = m.cert.c0;
    jr["c1"] = m.cert.c1;
    jr["c"] = m.cert.c;
    jr["gap"] = m.gap.value_or(-1);
    jr["rank"] = m.rank;
    jr["matches_closed_form"] = match;
    jrows.push_back(std::move(jr));
  }
  if (as_json) {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["rows"] = std::move(jrows);
    j["all_match"] = mismatches == 0;
    std::cout << j.dump(2) << "\n";
  } else {
    out << (mismatches == 0 ? "all rows match the closed forms\n"
                            : std::to_string(mismatches) + " rows mismatch\n");
    std::cout << out.str();
  }
  return mismatches == 0 ? kOk : kVerifyFail;
}

int run_construct(const FnInput& input, const std::string& method,
                  const std::string& out_path, bool want_dot, std::string dot_path) {
  const BoolFun f = input.resolve();
  DTree tree;
  if (method == "cert") {
    tree = cert_tree(f);
  } else if (method == "sparsity") {
    tree = sparsity_tree(f);
  } else {
    const auto expr = input.expression();
    const auto comp = expr ? expr->composition() : std::nullopt;
    if (!comp)
      throw CLI::ValidationError(
          "--method compose needs a composed --fn expression "
          "(TRIBES, TRIBES_D, COMPOSE or ITER)");
    std::vector<DTree> inner_trees;
    std::vector<int> arities;
    for (const BoolFun& g : comp->inners) {
      inner_trees.push_back(opt_depth(g).witness);
      arities.push_back(g.arity());
    }
    tree = composed_tree(opt_depth(comp->outer).witness, inner_trees, arities);
  }
  if (!tree.computes(f)) {
    std::cerr << "internal error: constructed tree does not compute the function\n";
    return kVerifyFail;
  }
  emit(out_path, tree.to_json().dump(2));
  if (want_dot && dot_path.empty()) {
    // Bare --dot: place the DOT next to the JSON output.
    if (out_path == "-") {
      std::cout << tree.to_dot();
    } else {
      dot_path = out_path;
      const std::string ext = ".json";
      if (dot_path.size() >= ext.size() &&
          dot_path.compare(dot_path.size() - ext.size(), ext.size(), ext) == 0)
        dot_path.resize(dot_path.size() - ext.size());
      dot_path += ".dot";
    }
  }
  if (!dot_path.empty()) write_file(dot_path, tree.to_dot());
  std::cerr << "rank " << tree.rank() << ", depth " << tree.depth() << ", size "
            << tree.size() << "\n";
  return kOk;
}

//! Orientation for the block strategies: rows are ORs iff the outer
//! function of the composition is AND.
bool rows_of_or_kind(const Composition& comp) {
  return comp.outer == catalog::and_fn(comp.outer.arity());
}

BlockShape resolve_shape(const FnInput& input, const std::string& blocks) {
  if (!blocks.empty()) {
    const auto x = blocks.find('x');
    if (x == std::string::npos)
      throw CLI::ValidationError("--blocks expects ROWSxCOLS, e.g. 3x3");
    return {std::stoi(blocks.substr(0, x)), std::stoi(blocks.substr(x + 1))};
  }
  const auto expr = input.expression();
  const auto shape = expr ? expr->block_shape() : std::nullopt;
  if (!shape)
    throw CLI::ValidationError(
        "this strategy needs a block layout; pass --blocks ROWSxCOLS or a "
        "composed --fn expression");
  return *shape;
}

int run_game(const FnInput& input, std::string prover_name, std::string delayer_name,
             bool asym, const std::string& blocks, bool as_json) {
  // "tribes" is shorthand for the row-major strategies.
  if (prover_name == "tribes") prover_name = "tribes-rowmajor";
  if (delayer_name == "tribes") delayer_name = "tribes-rowmajor";
  const BoolFun f = input.resolve();
  const auto expr = input.expression();
  const auto comp = expr ? expr->composition() : std::nullopt;
  const bool or_rows = comp ? rows_of_or_kind(*comp) : false;

  Transcript transcript;
  if (asym) {
    std::unique_ptr<AsymProverStrategy> prover;
    if (prover_name == "optimal")
      prover = make_asym_optimal_prover();
    else
      throw CLI::ValidationError("unknown asym prover '" + prover_name +
                                 "'; available: optimal");
    std::unique_ptr<AsymDelayerStrategy> delayer;
    if (delayer_name == "optimal")
      delayer = make_asym_optimal_delayer();
    else if (delayer_name == "tribes-rowmajor")
      delayer = make_asym_tribes_delayer(resolve_shape(input, blocks), or_rows);
    else
      throw CLI::ValidationError("unknown asym delayer '" + delayer_name +
                                 "'; available: optimal, tribes-rowmajor");
    transcript = play_asym(f, *prover, *delayer);
  } else {
    std::unique_ptr<ProverStrategy> prover;
    if (prover_name == "optimal")
      prover = make_optimal_prover();
    else if (prover_name == "tribes-rowmajor")
      prover = make_tribes_prover(resolve_shape(input, blocks), or_rows);
    else if (prover_name == "andparity")
      prover = make_andparity_prover(resolve_shape(input, blocks));
    else if (prover_name == "cert")
      prover = make_cert_prover();
    else if (prover_name == "compose") {
      if (!comp)
        throw CLI::ValidationError(
            "--prover compose needs a composed --fn expression");
      prover = make_compose_prover(comp->outer, comp->inners);
    } else {
      throw CLI::ValidationError(
          "unknown prover '" + prover_name +
          "'; available: optimal, tribes-rowmajor, andparity, cert, compose");
    }
    std::unique_ptr<DelayerStrategy> delayer;
    if (delayer_name == "optimal")
      delayer = make_optimal_delayer();
    else if (delayer_name == "tribes-rowmajor")
      delayer = make_tribes_delayer(resolve_shape(input, blocks), or_rows);
    else if (delayer_name == "andparity")
      delayer = make_andparity_delayer(resolve_shape(input, blocks));
    else
      throw CLI::ValidationError("unknown delayer '" + delayer_name +
                                 "'; available: optimal, tribes-rowmajor, andparity");
    transcript = play(f, *prover, *delayer);
  }

  if (as_json)
    std::cout << transcript.to_json().dump(2) << "\n";
  else
    std::cout << transcript.pretty();
  return kOk;
}

struct VerifyArgs {
  std::string suite = "all";
  int n = 3;
  int jobs = 1;
  std::uint64_t seed = 1;
  std::uint64_t count = 40;
  std::uint64_t budget_ms = 0;
  bool heavy = false;
  std::vector<std::string> checks;
  bool json = false;
};

int run_verify(const VerifyArgs& args) {
  SuiteOptions suite;
  suite.checks = args.checks;
  suite.jobs = args.jobs;
  suite.budget_ms = args.budget_ms;
  suite.exact.heavy = args.heavy;

  Report report;
  if (args.suite == "all") {
    StandardOptions std_opts;
    std_opts.exhaustive_n = std::min(args.n, 4);
    std_opts.seed = args.seed;
    std_opts.random_count = args.count;
    std_opts.suite = suite;
    report = run_standard(std_opts);
  } else if (args.suite == "exhaustive") {
    report = run_suite(Corpus::exhaustive(args.n), suite);
  } else if (args.suite == "symmetric") {
    report = run_suite(Corpus::all_symmetric(args.n), suite);
  } else if (args.suite == "catalog") {
    report = run_suite(Corpus::catalog(args.n), suite);
  } else if (args.suite == "random") {
    report = run_suite(Corpus::random(args.n, args.count, args.seed), suite);
  } else if (args.suite == "compose") {
    report = run_composition_suite(CompositionCorpus::exhaustive_pairs(2, 2), suite);
    report.append(run_composition_suite(
        CompositionCorpus::random_pairs(3, 3, args.count, args.seed), suite));
  } else if (args.suite == "named") {
    report = run_named_checks(suite);
  } else {
    throw CLI::ValidationError(
        "unknown suite '" + args.suite +
        "'; available: all, exhaustive, symmetric, catalog, random, compose, named");
  }

  if (args.json)
    std::cout << report.to_json().dump(2) << "\n";
  else
    std::cout << report.table();
  if (!report.all_passed()) return kVerifyFail;
  if (!report.complete()) return kBudget;
  return kOk;
}

int run_convert(const std::string& in_path, const std::string& to,
                const std::string& out_path) {
  const nlohmann::json parsed = nlohmann::json::parse(read_file(in_path));
  if (to == "conj") {
    const ConjTree conj = conj_from_simple(DTree::from_json(parsed));
    emit(out_path, conj.to_json().dump(2));
  } else {
    const DTree tree = simple_from_conj(ConjTree::from_json(parsed));
    emit(out_path, tree.to_json().dump(2));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact decision-tree complexity toolkit"};
  app.require_subcommand(1);

  FnInput measure_input;
  std::vector<int> weights;
  bool measure_json = false;
  auto* measure = app.add_subcommand("measure", "compute every measure of a function");
  measure_input.attach(measure);
  measure->add_option("--weights", weights, "per-variable query costs")->delimiter(',');
  measure->add_flag("--json", measure_json, "emit JSON instead of the summary");
  measure->add_flag("--table", "emit the plain summary (default)")->excludes("--json");

  int table_n = 3;
  bool table_json = false;
  auto* table1 = app.add_subcommand("table1", "closed-form table for the named families");
  table1->add_option("--n", table_n, "arity")->required()->check(CLI::Range(1, 10));
  table1->add_flag("--json", table_json, "emit JSON instead of the grid");

  FnInput construct_input;
  std::string method;
  std::string construct_out = "-";
  std::string construct_dot;
  auto* construct = app.add_subcommand("construct", "build a decision tree");
  construct_input.attach(construct);
  construct->add_option("--method", method, "construction to run")
      ->required()
      ->check(CLI::IsMember({"cert", "sparsity", "compose"}));
  construct->add_option("--out", construct_out, "tree JSON destination ('-' = stdout)");
  auto* dot_opt =
      construct->add_option("--dot", construct_dot,
                            "also write Graphviz DOT (default: next to --out)")
          ->expected(0, 1);

  FnInput game_input;
  std::string prover_name = "optimal";
  std::string delayer_name = "optimal";
  bool game_asym = false;
  std::string game_blocks;
  bool game_json = false;
  auto* game = app.add_subcommand("game", "play one Prover-Delayer game");
  game_input.attach(game);
  game->add_option("--prover", prover_name, "prover strategy");
  game->add_option("--delayer", delayer_name, "delayer strategy");
  game->add_flag("--asym", game_asym, "play the asymmetric (size) game");
  game->add_option("--blocks", game_blocks, "block layout ROWSxCOLS for row strategies");
  game->add_flag("--json", game_json, "emit the transcript as JSON");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "machine-check the theorems");
  verify->add_option("--suite", verify_args.suite,
                     "all|exhaustive|symmetric|catalog|random|compose|named");
  verify->add_option("--n", verify_args.n, "corpus arity");
  verify->add_option("--jobs", verify_args.jobs, "worker threads")
      ->check(CLI::Range(1, 64));
  verify->add_option("--seed", verify_args.seed, "random-corpus seed");
  verify->add_option("--count", verify_args.count, "random-corpus size");
  verify->add_option("--budget-ms", verify_args.budget_ms, "wall-clock budget");
  verify->add_flag("--heavy", verify_args.heavy, "include the 16-variable instances");
  verify->add_option("--checks", verify_args.checks, "run only these checks")
      ->delimiter(',');
  verify->add_flag("--json", verify_args.json, "emit the report as JSON");

  std::string convert_in;
  std::string convert_to;
  std::string convert_out = "-";
  auto* convert = app.add_subcommand("convert", "convert between tree kinds");
  convert->add_option("--in", convert_in, "input tree JSON")->required();
  convert->add_option("--to", convert_to, "target kind")
      ->required()
      ->check(CLI::IsMember({"conj", "simple"}));
  convert->add_option("--out", convert_out, "destination ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (measure->parsed()) return run_measure(measure_input, weights, measure_json);
    if (table1->parsed()) return run_table1(table_n, table_json);
    if (construct->parsed())
      return run_construct(construct_input, method, construct_out,
                           dot_opt->count() > 0, construct_dot);
    if (game->parsed())
      return run_game(game_input, prover_name, delayer_name, game_asym, game_blocks,
                      game_json);
    if (verify->parsed()) return run_verify(verify_args);
    if (convert->parsed()) return run_convert(convert_in, convert_to, convert_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
