// avoidctl: generators, reductions, oracle and verifier over arc-list files.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "avoid/constructions.hpp"
#include "avoid/io.hpp"
#include "avoid/oracle.hpp"
#include "avoid/patterns.hpp"
#include "avoid/pipeline.hpp"
#include "avoid/reductions.hpp"
#include "avoid/regular.hpp"
#include "avoid/report.hpp"

using namespace avoid;
using nlohmann::json;

namespace {

constexpr int kExitVerified = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string input;
  std::string output;
  std::string report;
  std::string dot;
  std::string profile = "desk";
  std::uint64_t seed = 1;
};

struct Params {
  int n = 100, d = 4, k = 2, t = 2, ell = 3, s = 2, a = 1, b = 2;
  int branching = 2, height = -1, colors = 3, length = 4;
  double p = -1.0;
  std::int64_t d_trim = -1;
  std::int64_t max_rounds = -1;
  std::string pattern;
  std::string pattern_file;
  std::string tree;
  std::vector<int> lengths{3, 5};
  std::vector<std::string> patterns;
  int max_vertices = 12, max_arcs = 30;
  std::int64_t max_nodes = 10'000'000;
};

class Run {
 public:
  Run(std::string command, const Common& common) : common_(common) {
    report_["command"] = std::move(command);
    report_["profile"] = common.profile;
    report_["seed"] = common.seed;
    report_["params"] = json::object();
    report_["checks"] = json::array();
    report_["rounds"] = 0;
    report_["verified"] = false;
  }

  json& report() { return report_; }
  void param(const std::string& name, json value) { report_["params"][name] = std::move(value); }
  void check(const std::string& name, bool passed, const std::string& detail = {}) {
    json c = {{"name", name}, {"passed", passed}};
    if (!detail.empty()) c["detail"] = detail;
    report_["checks"].push_back(std::move(c));
  }
  bool all_checks_pass() const {
    for (const auto& c : report_["checks"]) {
      if (!c["passed"].get<bool>()) return false;
    }
    return true;
  }

  void graph(const Digraph& g, const std::vector<std::string>& comments = {}) {
    report_["n"] = g.order();
    report_["m"] = g.size();
    report_["min_out"] = g.order() > 0 ? degree_stats(g).min_out : 0;
    if (!common_.output.empty()) write_text_file(common_.output, emit_arc_list(g, comments));
    if (!common_.dot.empty()) write_text_file(common_.dot, to_dot(g));
  }

  int finish(bool verified) {
    report_["verified"] = verified;
    report_["runtime_ms"] = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start_)
                                .count();
    const std::string text = report_.dump(2) + "\n";
    if (common_.report.empty()) {
      std::cout << text;
    } else {
      write_text_file(common_.report, text);
    }
    return verified ? kExitVerified : kExitFailure;
  }

 private:
  const Common& common_;
  json report_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool faithful_profile(const Common& c) { return c.profile == "paper_faithful"; }

ResampleConfig base_config(const Common& c, const Params& p) {
  ResampleConfig cfg;
  cfg.seed = c.seed;
  cfg.calibrated = !faithful_profile(c);
  if (p.p > 0) cfg.p = p.p;
  if (p.d_trim > 0) cfg.d_trim = p.d_trim;
  if (p.max_rounds > 0) cfg.max_rounds = p.max_rounds;
  return cfg;
}

Digraph input_graph(const Common& c) {
  if (c.input.empty()) throw CLI::ValidationError("--input", "an input graph is required");
  return read_graph_file(c.input);
}

Pattern load_pattern(const Params& p) {
  if (!p.pattern_file.empty()) {
    std::ifstream in(p.pattern_file);
    if (!in) throw Error(ErrorKind::InvalidVertex, "cannot read " + p.pattern_file);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::string name = pattern_name_comment(text);
    return {parse_graph_file(text), name.empty() ? p.pattern_file : name};
  }
  if (p.pattern.empty()) throw CLI::ValidationError("--pattern", "a pattern is required");
  return pattern_by_name(p.pattern);
}

BuildOptions build_options(const Params& p) {
  BuildOptions opts;
  opts.height_override = p.height;
  return opts;
}

void record_layered(Run& run, const LayeredRooted& g) {
  run.report()["faithful"] = g.faithful;
  std::vector<std::size_t> sizes;
  for (const auto& layer : g.layers) sizes.push_back(layer.size());
  run.report()["layer_sizes"] = sizes;
  const auto why = validate_layered(g);
  run.check("layered_rooted", why.empty(), why);
}

int gen(Run& run, const std::string& kind, const Common& c, const Params& p) {
  if (kind == "arborescence") {
    run.param("branching", p.branching);
    run.param("height", p.height);
    const auto g = out_arborescence(p.branching, std::max(p.height, 0), build_options(Params{}));
    record_layered(run, g);
    run.graph(g.graph);
  } else if (kind == "bipartite-gadget") {
    for (const auto& [name, v] : {std::pair{"a", p.a}, {"b", p.b}, {"k", p.k}, {"d", p.d}}) {
      run.param(name, v);
    }
    const auto g = bipartite_gadget(p.a, p.b, p.k, p.d, build_options(p));
    run.report()["gadget"] = to_json(g.info);
    run.check("min_out>=d", degree_stats(g.graph).min_out >= p.d);
    run.graph(g.graph, {"bipartite-gadget a=" + std::to_string(p.a) + " b=" + std::to_string(p.b) +
                            " k=" + std::to_string(p.k) + " d=" + std::to_string(p.d)});
    if (!c.output.empty()) write_text_file(c.output + ".json", to_json(g.info).dump(2) + "\n");
  } else if (kind == "layered-gadget") {
    run.param("k", p.k);
    run.param("d", p.d);
    run.param("t", p.t);
    const auto g = layered_gadget(p.k, p.d, p.t, build_options(p));
    record_layered(run, g);
    run.graph(g.graph);
  } else if (kind == "forest-gadget") {
    if (p.tree.empty()) throw CLI::ValidationError("--tree", "a tree file is required");
    run.param("tree", p.tree);
    run.param("d", p.d);
    const auto g = forest_gadget(read_graph_file(p.tree), p.d, build_options(p));
    run.report()["gadget"] = to_json(g.info);
    run.check("min_out>=d", degree_stats(g.graph).min_out >= p.d);
    run.graph(g.graph);
    if (!c.output.empty()) write_text_file(c.output + ".json", to_json(g.info).dump(2) + "\n");
  } else if (kind == "random-regular") {
    run.param("n", p.n);
    run.param("d", p.d);
    const auto g = random_regular_digraph(p.n, p.d, c.seed);
    int degree = 0;
    run.check("regular", is_regular(g, &degree) && degree == p.d);
    run.graph(g);
  }
  return run.finish(run.all_checks_pass());
}

void record_stage(Run& run, const ReductionReport& r) {
  run.report()["rounds"] = run.report()["rounds"].get<std::int64_t>() + r.rounds;
  run.report()["stages"].push_back(to_json(r));
  run.check(r.stage, r.verified, r.violations.empty() ? "" : r.violations.front());
}

int reduce(Run& run, const std::string& kind, const Common& c, const Params& p) {
  const Digraph d = input_graph(c);
  auto cfg = base_config(c, p);
  run.report()["stages"] = json::array();

  if (kind == "majority-color") {
    run.param("colors", p.colors);
    const auto col = majority_coloring(d, cfg, p.colors);
    const auto restricted = tripartite_restrict(d, col.coloring);
    run.report()["rounds"] = col.rounds;
    run.report()["partition"] = to_json(restricted.partition);
    run.check("majority_condition", majority_violation(d, col.coloring, p.colors) < 0);
    run.graph(restricted.graph);
  } else if (kind == "typed") {
    run.param("s", p.s);
    const auto col = majority_coloring(d, cfg, 3);
    const auto restricted = tripartite_restrict(d, col.coloring);
    const auto typed = extract_typed(restricted.graph, restricted.partition, p.s);
    run.report()["rounds"] = col.rounds;
    run.report()["partition"] = to_json(typed.partition);
    const auto why = check_typed(typed.graph, typed.partition);
    run.check("typed", why.empty(), why);
    run.graph(typed.graph);
  } else if (kind == "avoid-dicycles") {
    run.param("k", p.k);
    run.param("lengths", p.lengths);
    if (p.d_trim <= 0) cfg.d_trim = degree_stats(d).min_out;
    run.param("d_trim", cfg.d_trim);
    run.param("p", cfg.p);
    ReductionReport r;
    const auto out = avoid_directed_cycles(d, p.lengths, p.k, cfg, &r);
    record_stage(run, r);
    run.graph(out);
  } else if (kind == "avoid-c35") {
    run.param("k", p.k);
    const auto profile =
        faithful_profile(c) ? paper_faithful_profile(p.k, c.seed) : desk_profile(p.k, c.seed);
    try {
      const auto result = pipeline_avoid_c3_c5(d, profile);
      for (const auto& r : result.reports) record_stage(run, r);
      run.report()["partition"] = to_json(result.partition);
      run.graph(result.graph);
    } catch (const PipelineError& e) {
      for (const auto& r : e.reports()) record_stage(run, r);
      run.report()["failed_stage"] = e.stage();
      throw;
    }
  } else if (kind == "regular-cycle") {
    run.param("ell", p.ell);
    run.param("k", p.k);
    if (p.p <= 0) cfg.p = std::pow(static_cast<double>(p.k), -p.ell);
    run.param("p", cfg.p);
    ReductionReport r;
    const auto out = avoid_short_cycle_regular(d, p.ell, p.k, cfg, &r);
    record_stage(run, r);
    run.graph(out);
  } else if (kind == "layered-partition") {
    run.param("t", p.t);
    run.param("k", p.k);
    const auto probs = partition_probabilities(p.t, p.k);
    json exact = json::array();
    for (const auto& q : probs.exact) exact.push_back(q.str());
    run.report()["probabilities"] = exact;
    ReductionReport r;
    const auto out = layered_partition(d, p.t, p.k, cfg, &r);
    record_stage(run, r);
    run.report()["partition"] = to_json(out.partition);
    run.graph(out.graph);
  } else if (kind == "regular-avoid") {
    const Pattern f = load_pattern(p);
    run.param("pattern", f.name);
    run.param("k", p.k);
    try {
      const auto result = regular_avoid(d, f, p.k, cfg);
      run.report()["branch"] = result.branch;
      run.report()["branch_parameter"] = result.parameter;
      if (result.branch == "layered") run.report()["partition"] = to_json(result.partition);
      record_stage(run, result.report);
      run.check("free_of:" + f.name, !find_pattern(result.graph, f));
      run.graph(result.graph);
    } catch (const NotRegularAvoidable& e) {
      run.report()["certificate"] = to_json(e.certificate());
      throw;
    }
  }
  return run.finish(run.all_checks_pass());
}

int verify_cmd(Run& run, const Common& c, const Params& p) {
  const Digraph d = input_graph(c);
  VerificationSpec spec;
  spec.min_out = p.k;
  run.param("k", p.k);
  run.param("patterns", p.patterns);
  for (const auto& name : p.patterns) spec.forbidden.push_back(pattern_by_name(name));
  if (!p.pattern_file.empty()) spec.forbidden.push_back(load_pattern(p));
  const auto rep = verify(d, spec);
  run.report()["checks"] = to_json(rep)["checks"];
  run.graph(d);
  return run.finish(rep.passed);
}

int oracle_cmd(Run& run, const std::string& kind, const Common& c, const Params& p) {
  const Digraph d = input_graph(c);
  const Pattern f = load_pattern(p);
  OracleCaps caps{p.max_vertices, p.max_arcs, p.max_nodes};
  run.param("pattern", f.name);
  run.report()["n"] = d.order();
  run.report()["m"] = d.size();
  run.report()["min_out"] = d.order() > 0 ? degree_stats(d).min_out : 0;
  if (kind == "max-ffree") {
    const auto r = max_f_free_min_outdegree(d, f, caps);
    run.report()["value"] = r.value;
    run.report()["nodes"] = r.nodes;
    run.report()["witness_vertices"] = r.witness_vertices;
    if (!c.output.empty()) write_text_file(c.output, emit_arc_list(r.witness));
    run.check("exhaustive", true);
    return run.finish(true);
  }
  run.param("k", p.k);
  const auto r = check_unavoidable(d, f, p.k, caps);
  run.report()["verdict"] = std::string(to_string(r.verdict));
  run.report()["nodes"] = r.nodes;
  if (!r.note.empty()) run.report()["note"] = r.note;
  if (r.witness && !c.output.empty()) write_text_file(c.output, emit_arc_list(r.witness->witness));
  run.check("decided", r.verdict != Verdict::Unknown);
  return run.finish(r.verdict != Verdict::Unknown);
}

int orient_cmd(Run& run, const Params& p) {
  run.param("length", p.length);
  json list = json::array();
  for (const auto& pat : enumerate_orientations(p.length)) {
    json arcs = json::array();
    for (const auto& a : pat.graph.arcs()) arcs.push_back({a.tail, a.head});
    list.push_back({{"name", pat.name}, {"arcs", arcs}});
  }
  run.report()["orientations"] = list;
  run.report()["count"] = list.size();
  return run.finish(true);
}

bool honest_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::InvalidArc:
    case ErrorKind::InvalidVertex:
    case ErrorKind::UnknownPattern:
      return false;
    default:
      return true;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generators, reductions and exact checks for digraph avoidance"};
  app.require_subcommand(1);
  Common common;
  Params params;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-i,--input", common.input, "input arc-list file");
    cmd->add_option("-o,--output", common.output, "output arc-list file");
    cmd->add_option("--report", common.report, "JSON report path (default stdout)");
    cmd->add_option("--dot", common.dot, "also write the output graph as DOT");
    cmd->add_option("--profile", common.profile)
        ->check(CLI::IsMember({"desk", "paper_faithful"}));
    cmd->add_option("--seed", common.seed);
    cmd->add_option("--n", params.n);
    cmd->add_option("--d", params.d);
    cmd->add_option("--k", params.k);
    cmd->add_option("--t", params.t);
    cmd->add_option("--ell", params.ell);
    cmd->add_option("--s", params.s);
    cmd->add_option("--a", params.a);
    cmd->add_option("--b", params.b);
    cmd->add_option("--p", params.p);
    cmd->add_option("--d-trim", params.d_trim);
    cmd->add_option("--max-rounds", params.max_rounds);
    cmd->add_option("--height", params.height, "override the computed arborescence height");
    cmd->add_option("--branching", params.branching);
    cmd->add_option("--colors", params.colors)->check(CLI::IsMember({2, 3}));
    cmd->add_option("--pattern", params.pattern);
    cmd->add_option("--pattern-file", params.pattern_file);
    cmd->add_option("--patterns", params.patterns)->delimiter(',');
    cmd->add_option("--lengths", params.lengths)->delimiter(',');
    cmd->add_option("--tree", params.tree);
    cmd->add_option("--length", params.length);
    cmd->add_option("--max-vertices", params.max_vertices);
    cmd->add_option("--max-arcs", params.max_arcs);
    cmd->add_option("--max-nodes", params.max_nodes);
  };

  std::string kind;
  auto* gen_cmd = app.add_subcommand("gen", "build a host or gadget digraph");
  gen_cmd->add_option("kind", kind)
      ->required()
      ->check(CLI::IsMember(
          {"arborescence", "bipartite-gadget", "layered-gadget", "forest-gadget", "random-regular"}));
  add_common(gen_cmd);
  auto* reduce_cmd = app.add_subcommand("reduce", "run one reduction");
  reduce_cmd->add_option("kind", kind)
      ->required()
      ->check(CLI::IsMember({"majority-color", "typed", "avoid-dicycles", "avoid-c35",
                             "regular-cycle", "layered-partition", "regular-avoid"}));
  add_common(reduce_cmd);
  auto* verify_sub = app.add_subcommand("verify", "check degree and pattern constraints");
  add_common(verify_sub);
  auto* oracle_sub = app.add_subcommand("oracle", "exact search on small instances");
  oracle_sub->add_option("kind", kind)->required()->check(CLI::IsMember({"max-ffree", "unavoidable"}));
  add_common(oracle_sub);
  auto* orient_sub = app.add_subcommand("orient-enum", "list orientations of a cycle");
  add_common(orient_sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  if (!kind.empty()) command += " " + kind;
  Run run(command, common);
  try {
    if (*gen_cmd) return gen(run, kind, common, params);
    if (*reduce_cmd) return reduce(run, kind, common, params);
    if (*verify_sub) return verify_cmd(run, common, params);
    if (*oracle_sub) return oracle_cmd(run, kind, common, params);
    if (*orient_sub) return orient_cmd(run, params);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (!honest_failure(e.kind())) return kExitUsage;
    run.report()["error"] = e.what();
    return run.finish(false);
  } catch (const std::exception& e) {
    // file I/O
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
