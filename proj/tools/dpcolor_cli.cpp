// Copyright 2026 The dpcolor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit codes: 0 success, 1 usage/IO/parse errors,
// 2 semantic failures (infeasible extension, privacy violation, invalid
// hitting set, failed pair check or audit).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpcolor/dpcolor.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kSemantic = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Computed output is written to a temporary file first and renamed into
// place, or to stdout when no path was given.
void write_output(const std::optional<std::string>& path, const std::string& content) {
  if (!path) {
    std::cout << content;
    return;
  }
  const std::filesystem::path target(*path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
  }
  std::filesystem::rename(tmp, target);
}

struct ParamOpts {
  double epsilon = 0.0;
  double e_epsilon = 0.0;
  double delta = 0.0;
  double tol = dpcolor::kDefaultTol;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* e_epsilon_opt = nullptr;

  void attach(CLI::App* cmd, bool with_tol = true) {
    epsilon_opt = cmd->add_option("--epsilon", epsilon, "privacy parameter epsilon (>= 0)")
                      ->check(CLI::NonNegativeNumber);
    e_epsilon_opt = cmd->add_option("--e-epsilon", e_epsilon,
                                    "e^epsilon directly (>= 1), e.g. 2 for epsilon = log 2");
    epsilon_opt->excludes(e_epsilon_opt);
    e_epsilon_opt->excludes(epsilon_opt);
    cmd->add_option("--delta", delta, "privacy parameter delta in [0,1)")
        ->check(CLI::Range(0.0, 1.0));
    if (with_tol)
      cmd->add_option("--tol", tol, "absolute comparison tolerance")->check(CLI::PositiveNumber);
  }

  dpcolor::DpParams params() const {
    if (e_epsilon_opt->count() > 0) return dpcolor::DpParams::from_lambda(e_epsilon, delta);
    if (epsilon_opt->count() == 0)
      throw CLI::RequiredError("--epsilon or --e-epsilon");
    return dpcolor::DpParams(epsilon, delta);
  }
};

dpcolor::PartialMechanism load_partial(const dpcolor::DatasetGraph& g, const std::string& path,
                                       double tol) {
  const auto pm = dpcolor::partial_from_text(read_file(path), tol);
  for (const auto& [id, value] : pm.assignment) g.index_of(id);
  return pm;
}

// The listed vertices are the declared hitting set; refuse to extend from a
// set that misses a boundary edge.
bool report_hitting_set(const dpcolor::DatasetGraph& g, const dpcolor::PartialMechanism& pm) {
  const auto report = dpcolor::validate_hitting_set(g, pm.members());
  if (report.ok) return true;
  std::cout << "not a boundary-hitting set; uncovered boundary edges:\n";
  for (const auto& e : report.uncovered) std::cout << "  (" << e.u << ", " << e.v << ")\n";
  return false;
}

void print_violations(const dpcolor::DatasetGraph& g, const dpcolor::PartialMechanism& pm,
                      const dpcolor::DpBoundPair& pair, double tol, bool all,
                      const dpcolor::FeasibilityViolation& first) {
  std::cout << "No (L,U)-private extension exists.\n";
  if (all) {
    for (const auto& v : dpcolor::extension_violations(g, pm, pair, tol))
      std::cout << "  " << v.message() << "\n";
  } else {
    std::cout << "  " << first.message() << "\n";
  }
}

struct ExtendOpts {
  std::string graph_path, partial_path;
  ParamOpts params;
  std::optional<std::string> out;
  bool all_violations = false;
};

int cmd_extend(const ExtendOpts& opt) {
  const auto g = dpcolor::load_graph(read_file(opt.graph_path));
  const auto pm = load_partial(g, opt.partial_path, opt.params.tol);
  if (!report_hitting_set(g, pm)) return kSemantic;
  const dpcolor::DpBoundPair pair(opt.params.params());
  try {
    const auto m = dpcolor::extend(g, pm, pair, opt.params.tol);
    write_output(opt.out, dpcolor::mechanism_to_csv(g, m));
  } catch (const dpcolor::InfeasibleError& e) {
    print_violations(g, pm, pair, opt.params.tol, opt.all_violations, e.violation);
    return kSemantic;
  }
  return kOk;
}

struct EvaluateOpts {
  std::string graph_path, partial_path, vertex;
  ParamOpts params;
};

int cmd_evaluate(const EvaluateOpts& opt) {
  const auto g = dpcolor::load_graph(read_file(opt.graph_path));
  const auto pm = load_partial(g, opt.partial_path, opt.params.tol);
  if (!report_hitting_set(g, pm)) return kSemantic;
  const dpcolor::DpBoundPair pair(opt.params.params());
  try {
    const auto r = dpcolor::evaluate_at(g, pm, pair, opt.vertex, opt.params.tol);
    std::cout << opt.vertex << " " << dpcolor::to_string(g.color(opt.vertex)) << " "
              << dpcolor::format_probability(r.prob_true) << " ";
    switch (r.provenance.kind) {
      case dpcolor::SourceKind::kGiven: std::cout << "(given)\n"; break;
      case dpcolor::SourceKind::kUnconstrained: std::cout << "(unconstrained)\n"; break;
      case dpcolor::SourceKind::kBoundBy:
        std::cout << "(bound by " << r.provenance.source << ")\n";
        break;
    }
  } catch (const dpcolor::InfeasibleError& e) {
    std::cout << "No (L,U)-private extension exists.\n  " << e.violation.message() << "\n";
    return kSemantic;
  }
  return kOk;
}

struct CheckOpts {
  std::string graph_path, mechanism_path;
  ParamOpts params;
  bool exhaustive = false;
};

int cmd_check(const CheckOpts& opt) {
  const auto g = dpcolor::load_graph(read_file(opt.graph_path));
  const auto m = dpcolor::mechanism_from_csv(g, read_file(opt.mechanism_path), opt.params.tol);
  const auto params = opt.params.params();
  const dpcolor::DpBoundPair pair(params);
  int rc = kOk;
  if (const auto v =
          dpcolor::check_pairwise_private(g, m, pair, opt.params.tol, opt.exhaustive)) {
    std::cout << "pairwise: violation " << v->message() << "\n";
    rc = kSemantic;
  } else {
    std::cout << "pairwise: ok\n";
  }
  if (const auto v = dpcolor::check_edge_private(g, m, params, opt.params.tol)) {
    std::cout << "edges: violation " << v->message() << "\n";
    rc = kSemantic;
  } else {
    std::cout << "edges: ok\n";
  }
  return rc;
}

struct AuditOpts {
  std::string graph_path, mechanism_path;
  ParamOpts params;
  long samples = 100000;
  std::uint64_t seed = 0;
  bool strict = false;
  CLI::Option* seed_opt = nullptr;
};

int cmd_audit(const AuditOpts& opt) {
  const auto g = dpcolor::load_graph(read_file(opt.graph_path));
  const auto m = dpcolor::mechanism_from_csv(g, read_file(opt.mechanism_path), opt.params.tol);
  const auto report = dpcolor::audit(g, m, opt.params.params(), opt.samples, opt.seed);
  std::cout << report.summary() << "\n";
  return report.pass ? kOk : kSemantic;
}

struct PairCheckOpts {
  ParamOpts params;
  int grid = 10000;
};

int cmd_pair_check(const PairCheckOpts& opt) {
  const dpcolor::DpBoundPair pair(opt.params.params());
  const auto report = dpcolor::check_suitable_pair(pair, opt.grid, opt.params.tol);
  std::cout << "pair-check: " << report.summary() << "\n";
  return report.pass ? kOk : kSemantic;
}

struct BoundaryOpts {
  std::string graph_path;
  std::optional<std::string> out;
};

int cmd_boundary(const BoundaryOpts& opt) {
  const auto g = dpcolor::load_graph(read_file(opt.graph_path));
  const auto bs = dpcolor::boundary(g);
  std::cout << "boundary edges (" << bs.boundary_edges.size() << "):\n";
  for (const auto& e : bs.boundary_edges) std::cout << "  (" << e.u << ", " << e.v << ")\n";
  const auto print_set = [](const char* label, const std::vector<std::string>& vs) {
    std::cout << label << " (" << vs.size() << "):";
    for (const auto& v : vs) std::cout << " " << v;
    std::cout << "\n";
  };
  print_set("boundary vertices", bs.boundary_vertices);
  print_set("boundary blue", bs.blue_vertices);
  print_set("boundary red", bs.red_vertices);
  if (opt.out) {
    std::string csv = "u,v\n";
    for (const auto& e : bs.boundary_edges) csv += e.u + "," + e.v + "\n";
    write_output(opt.out, csv);
  }
  return kOk;
}

struct HittingSetOpts {
  std::string graph_path;
  std::string strategy = "greedy-cover";
  std::vector<std::string> validate;
  std::optional<std::string> out;
};

int cmd_hitting_set(const HittingSetOpts& opt) {
  const auto g = dpcolor::load_graph(read_file(opt.graph_path));
  if (!opt.validate.empty()) {
    const auto report = dpcolor::validate_hitting_set(g, opt.validate);
    if (report.ok) {
      std::cout << "valid boundary-hitting set\n";
      return kOk;
    }
    std::cout << "invalid; uncovered boundary edges:\n";
    for (const auto& e : report.uncovered) std::cout << "  (" << e.u << ", " << e.v << ")\n";
    return kSemantic;
  }
  const auto strategy = opt.strategy == "all-boundary" ? dpcolor::HittingStrategy::kAllBoundary
                                                       : dpcolor::HittingStrategy::kGreedyCover;
  const auto hs = dpcolor::default_hitting_set(g, strategy);
  for (const auto& m : hs.members) std::cout << m << "\n";
  if (opt.out) {
    std::string csv = "vertex\n";
    for (const auto& m : hs.members) csv += m + "\n";
    write_output(opt.out, csv);
  }
  return kOk;
}

struct GenerateOpts {
  std::string kind;
  int n = 1;
  int threshold = 0;
  double edge_prob = 0.5;
  std::uint64_t seed = 0;
  std::string coloring = "alternating";
  std::optional<std::string> out;
  bool strict = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
};

int cmd_generate(const GenerateOpts& opt) {
  dpcolor::GeneratorSpec spec;
  if (opt.kind == "path") spec.kind = dpcolor::GraphKind::kPath;
  else if (opt.kind == "cycle") spec.kind = dpcolor::GraphKind::kCycle;
  else if (opt.kind == "complete") spec.kind = dpcolor::GraphKind::kComplete;
  else if (opt.kind == "hypercube") spec.kind = dpcolor::GraphKind::kHypercube;
  else if (opt.kind == "random-connected") spec.kind = dpcolor::GraphKind::kRandomConnected;
  else throw CLI::ValidationError("unknown graph kind '" + opt.kind + "'");
  spec.n = opt.n;
  spec.edge_prob = opt.edge_prob;
  spec.seed = opt.seed;
  if (opt.coloring == "alternating") {
    spec.coloring = dpcolor::ColoringRule::alternating();
  } else if (opt.coloring == "threshold") {
    spec.coloring = dpcolor::ColoringRule::with_threshold(opt.threshold);
  } else if (opt.coloring == "random") {
    spec.coloring = dpcolor::ColoringRule::random();
  } else if (opt.coloring.rfind("explicit:", 0) == 0) {
    std::vector<dpcolor::Color> colors;
    std::istringstream list(opt.coloring.substr(9));
    std::string item;
    while (std::getline(list, item, ',')) {
      const auto c = dpcolor::color_from_string(item);
      if (!c) throw CLI::ValidationError("unknown color '" + item + "'");
      colors.push_back(*c);
    }
    spec.coloring = dpcolor::ColoringRule::explicit_colors(std::move(colors));
  } else {
    throw CLI::ValidationError("unknown coloring rule '" + opt.coloring + "'");
  }
  if (opt.coloring == "threshold" && opt.threshold_opt->count() == 0)
    throw CLI::RequiredError("--threshold (with --coloring threshold)");
  const auto g = dpcolor::generate(spec);
  write_output(opt.out, g.to_text());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpcolor: optimal binary (epsilon,delta)-private mechanisms on dataset graphs"};
  app.require_subcommand(1);

  ExtendOpts extend_opts;
  auto* extend = app.add_subcommand("extend", "compute the optimal private extension as CSV");
  extend->add_option("graph", extend_opts.graph_path, "graph file")->required();
  extend->add_option("partial", extend_opts.partial_path, "partial-mechanism file")->required();
  extend_opts.params.attach(extend);
  extend->add_option("--out", [&extend_opts](const std::vector<std::string>& v) {
    extend_opts.out = v.front();
    return true;
  }, "output CSV path (stdout otherwise)");
  extend->add_flag("--all-violations", extend_opts.all_violations,
                   "list every infeasible hitting-set pair");

  EvaluateOpts eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "evaluate the optimal extension at one vertex");
  evaluate->add_option("graph", eval_opts.graph_path, "graph file")->required();
  evaluate->add_option("partial", eval_opts.partial_path, "partial-mechanism file")->required();
  evaluate->add_option("vertex", eval_opts.vertex, "vertex to evaluate")->required();
  eval_opts.params.attach(evaluate);

  CheckOpts check_opts;
  auto* check = app.add_subcommand("check", "verify a mechanism CSV against the privacy bounds");
  check->add_option("graph", check_opts.graph_path, "graph file")->required();
  check->add_option("mechanism", check_opts.mechanism_path, "mechanism CSV")->required();
  check_opts.params.attach(check);
  check->add_flag("--exhaustive", check_opts.exhaustive,
                  "also check the red-side and lower-bound conditions");

  AuditOpts audit_opts;
  auto* audit = app.add_subcommand("audit", "sampling audit of a mechanism CSV");
  audit->add_option("graph", audit_opts.graph_path, "graph file")->required();
  audit->add_option("mechanism", audit_opts.mechanism_path, "mechanism CSV")->required();
  audit_opts.params.attach(audit);
  audit->add_option("--samples", audit_opts.samples, "Bernoulli samples per vertex (>= 100)")
      ->check(CLI::Range(100L, 1000000000L));
  audit_opts.seed_opt = audit->add_option("--seed", audit_opts.seed, "PRNG seed");
  audit->add_flag("--strict", audit_opts.strict, "require an explicit --seed");

  PairCheckOpts pair_opts;
  auto* pair_check = app.add_subcommand("pair-check", "grid-check the DP bound pair axioms");
  pair_opts.params.attach(pair_check);
  pair_check->add_option("--grid", pair_opts.grid, "grid size (>= 2)")
      ->check(CLI::Range(2, 100000000));

  BoundaryOpts boundary_opts;
  auto* boundary_cmd = app.add_subcommand("boundary", "print the boundary structure");
  boundary_cmd->add_option("graph", boundary_opts.graph_path, "graph file")->required();
  boundary_cmd->add_option("--out", [&boundary_opts](const std::vector<std::string>& v) {
    boundary_opts.out = v.front();
    return true;
  }, "write boundary edges as CSV");

  HittingSetOpts hs_opts;
  auto* hitting = app.add_subcommand("hitting-set", "construct or validate a boundary-hitting set");
  hitting->add_option("graph", hs_opts.graph_path, "graph file")->required();
  hitting->add_option("--strategy", hs_opts.strategy, "all-boundary or greedy-cover")
      ->check(CLI::IsMember({"all-boundary", "greedy-cover"}));
  hitting->add_option("--validate", hs_opts.validate,
                      "comma-separated vertex ids to validate instead")
      ->delimiter(',');
  hitting->add_option("--out", [&hs_opts](const std::vector<std::string>& v) {
    hs_opts.out = v.front();
    return true;
  }, "write members as CSV");

  GenerateOpts gen_opts;
  auto* generate = app.add_subcommand("generate", "emit a graph file");
  generate->add_option("kind", gen_opts.kind,
                       "path | cycle | complete | hypercube | random-connected")
      ->required();
  generate->add_option("-n,--size", gen_opts.n, "vertex count (bit width for hypercube)")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_opts.threshold_opt =
      generate->add_option("--threshold", gen_opts.threshold, "threshold coloring parameter");
  generate->add_option("--edge-prob", gen_opts.edge_prob, "edge probability (random-connected)")
      ->check(CLI::Range(0.0, 1.0));
  gen_opts.seed_opt = generate->add_option("--seed", gen_opts.seed, "PRNG seed");
  generate->add_option("--coloring", gen_opts.coloring,
                       "alternating | threshold | random | explicit:<c1,c2,...>");
  generate->add_option("--out", [&gen_opts](const std::vector<std::string>& v) {
    gen_opts.out = v.front();
    return true;
  }, "output graph path (stdout otherwise)");
  generate->add_flag("--strict", gen_opts.strict, "require an explicit --seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (extend->parsed()) return cmd_extend(extend_opts);
    if (evaluate->parsed()) return cmd_evaluate(eval_opts);
    if (check->parsed()) return cmd_check(check_opts);
    if (audit->parsed()) {
      if (audit_opts.strict && audit_opts.seed_opt->count() == 0) {
        std::cerr << "error: --strict requires an explicit --seed\n";
        return kUsage;
      }
      return cmd_audit(audit_opts);
    }
    if (pair_check->parsed()) return cmd_pair_check(pair_opts);
    if (boundary_cmd->parsed()) return cmd_boundary(boundary_opts);
    if (hitting->parsed()) return cmd_hitting_set(hs_opts);
    if (generate->parsed()) {
      const bool randomized =
          gen_opts.kind == "random-connected" || gen_opts.coloring == "random";
      if (gen_opts.strict && randomized && gen_opts.seed_opt->count() == 0) {
        std::cerr << "error: --strict requires an explicit --seed\n";
        return kUsage;
      }
      return cmd_generate(gen_opts);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const dpcolor::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
