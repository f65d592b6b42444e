#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "usched/usched.hpp"

namespace usched::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kGuardViolation = 2,
  kInfeasible = 3,
};

struct SolveArgs {
  std::string instance;
  std::string algo = "auto";
  std::optional<std::size_t> lambda;
  std::string witness;
  std::string stats;
};

struct GenArgs {
  std::string family;
  std::vector<std::string> params;
  std::size_t machines = 3;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

inline void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

/// Exit status for an exception escaping a command.
inline int classify(std::ostream &err) {
  try {
    throw;
  } catch (const InstanceTooLarge &e) {
    err << "error: " << e.what() << '\n';
    return kGuardViolation;
  } catch (const SourceOverflow &e) {
    err << "error: " << e.what() << '\n';
    return kGuardViolation;
  } catch (const NegativeLayer &e) {
    err << "error: " << e.what() << '\n';
    return kGuardViolation;
  } catch (const BadParams &e) {
    err << "error: " << e.what() << '\n';
    return kGuardViolation;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

inline nlohmann::json branch_json(const BranchStats &s) {
  const TreeBoundsVerdict v = report_tree_bounds(s);
  return {
      {"lambda", s.lambda},
      {"calls", s.calls},
      {"leaf_calls", s.leaf_calls},
      {"nonleaf_calls", s.nonleaf_calls},
      {"red_nonleaves", s.red_nonleaves},
      {"empty_intervals", s.empty_intervals},
      {"max_children", s.max_children},
      {"max_tree_height", s.max_tree_height()},
      {"trees", s.tree_heights.size()},
      {"progress_violations", s.progress_violations},
      {"bounds",
       {{"red_nonleaves", v.red_bound},
        {"tree_height", v.height_bound},
        {"children", v.children_bound},
        {"ok", v.ok}}},
  };
}

inline nlohmann::json stats_json(const Instance &inst, const SolveReport &r) {
  const PrecedenceGraph &g = inst.graph;
  nlohmann::json j = {
      {"algorithm", std::string(to_string(r.algorithm))},
      {"dispatched", nullptr},
      {"instance",
       {{"jobs", g.size()},
        {"machines", inst.machines},
        {"sources", g.sources().size()},
        {"sinks", g.sinks().size()},
        {"input_arcs", g.input_arc_count()},
        {"closure_arcs", g.closure_arc_count()},
        {"height", g.height()}}},
      {"makespan", r.makespan},
      {"peeled_rounds", r.peeled_rounds},
      {"memo_hits", r.memo_hits},
      {"nodes", r.nodes},
      {"wall_ms", r.wall_ms},
      {"branch", nullptr},
  };
  if (r.dispatched)
    j["dispatched"] = std::string(to_string(*r.dispatched));
  if (r.branch)
    j["branch"] = branch_json(*r.branch);
  return j;
}

inline SolveReport run_solver(const Instance &inst, Algorithm algo,
                              std::optional<std::size_t> lambda, bool witness) {
  switch (algo) {
  case Algorithm::brute:
    return solve_brute(inst);
  case Algorithm::antichain_dp:
    return solve_antichain_dp(inst);
  case Algorithm::subexp:
    return solve_subexp(inst, SubexpOptions{lambda, witness});
  case Algorithm::subset_conv: {
    SubsetConvOptions o;
    o.witness = witness;
    return solve_subset_conv(inst, o);
  }
  case Algorithm::combined:
    break;
  }
  CombinedOptions o;
  o.lambda = lambda;
  o.witness = witness;
  return solve_combined(inst, o);
}

inline Algorithm algorithm_or_throw(const std::string &name) {
  auto a = parse_algorithm(name);
  if (!a)
    throw BadParams("unknown algorithm '" + name + "'");
  return *a;
}

inline std::size_t count_param(const std::vector<std::string> &p, std::size_t i,
                               const std::string &what) {
  if (i >= p.size())
    throw BadParams("missing parameter " + what);
  const std::string &w = p[i];
  if (w.empty() || w.find_first_not_of("0123456789") != std::string::npos)
    throw BadParams("parameter " + what + " must be a non-negative integer");
  return static_cast<std::size_t>(std::stoull(w));
}

inline std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

} // namespace detail

inline int cmd_solve(const SolveArgs &a, std::ostream &out, std::ostream &err) {
  try {
    const Algorithm algo = detail::algorithm_or_throw(a.algo);
    const Instance inst = parse_instance(detail::read_file(a.instance)).to_instance();
    const bool want_witness = !a.witness.empty();
    const SolveReport r = detail::run_solver(inst, algo, a.lambda, want_witness);
    if (want_witness) {
      if (!r.witness)
        throw WitnessUnavailable("solver produced no schedule");
      if (auto v = check_feasible(inst.graph, *r.witness, inst.graph.jobs()); !v)
        throw WitnessUnavailable("witness failed verification: " + v.message);
      detail::write_file(a.witness, format_schedule(*r.witness));
    }
    if (!a.stats.empty())
      detail::write_file(a.stats, detail::stats_json(inst, r).dump(2) + "\n");
    out << "makespan " << r.makespan << '\n';
    return kOk;
  } catch (...) {
    return detail::classify(err);
  }
}

inline int cmd_gen(const GenArgs &a, std::ostream &out, std::ostream &err) {
  try {
    const auto &p = a.params;
    InstanceText t;
    if (a.family == "chain") {
      t = gen::chain(detail::count_param(p, 0, "n"), a.machines);
    } else if (a.family == "chains") {
      t = gen::chains(detail::count_param(p, 0, "k"), detail::count_param(p, 1, "L"),
                      a.machines);
    } else if (a.family == "outstar") {
      t = gen::outstar(detail::count_param(p, 0, "k"), a.machines);
    } else if (a.family == "antichain") {
      t = gen::antichain(detail::count_param(p, 0, "n"), a.machines);
    } else if (a.family == "random") {
      if (p.size() < 2)
        throw BadParams("random needs <n> <p>");
      double prob = 0.0;
      try {
        std::size_t used = 0;
        prob = std::stod(p[1], &used);
        if (used != p[1].size())
          throw std::invalid_argument(p[1]);
      } catch (const std::logic_error &) {
        throw BadParams("edge probability must be a number");
      }
      t = gen::random(detail::count_param(p, 0, "n"), prob, a.seed, a.machines);
    } else if (a.family == "grid") {
      t = gen::grid(detail::count_param(p, 0, "rows"), detail::count_param(p, 1, "cols"),
                    a.machines);
    } else if (a.family == "dks") {
      if (p.empty())
        throw BadParams("dks needs the path of a densest-subgraph file");
      t = gen::dks(parse_dks(detail::read_file(p[0])));
    } else {
      throw BadParams("unknown family '" + a.family + "'");
    }
    if (t.jobs > kMaxJobs)
      throw InstanceTooLarge("generated instance has " + std::to_string(t.jobs) +
                             " jobs; capacity is " + std::to_string(kMaxJobs));
    write_instance(out, t);
    return kOk;
  } catch (...) {
    return detail::classify(err);
  }
}

inline int cmd_verify(const std::string &instance_path,
                      const std::string &schedule_path, std::ostream &out,
                      std::ostream &err) {
  try {
    const Instance inst = parse_instance(detail::read_file(instance_path)).to_instance();
    const Schedule s = parse_schedule(detail::read_file(schedule_path), inst.machines);
    const FeasibilityVerdict v = check_feasible(inst.graph, s, inst.graph.jobs());
    if (!v) {
      out << "infeasible " << to_string(v.violation) << ": " << v.message << '\n';
      return kInfeasible;
    }
    out << "feasible makespan " << s.makespan() << '\n';
    return kOk;
  } catch (...) {
    return detail::classify(err);
  }
}

inline const char *kBenchHeader =
    "instance,n,m,algo,lambda,makespan,wall_ms,memo_hits,tree_nodes,"
    "red_nonleaves,bound_red_nonleaves,max_tree_height,bound_height,status";

/// Manifest rows are `<instance path> <algo> [lambda]`; paths are relative
/// to the manifest. `#` starts a comment line.
inline int cmd_bench(const std::string &manifest_path, std::ostream &out,
                     std::ostream &err) {
  std::string manifest;
  try {
    manifest = detail::read_file(manifest_path);
  } catch (...) {
    return detail::classify(err);
  }
  const std::filesystem::path base =
      std::filesystem::path(manifest_path).parent_path();
  out << kBenchHeader << '\n';
  std::istringstream rows(manifest);
  std::string raw;
  while (std::getline(rows, raw)) {
    std::istringstream words(raw);
    std::string path, algo, lambda_word;
    if (!(words >> path) || path[0] == '#')
      continue;
    words >> algo >> lambda_word;
    std::vector<std::string> cols(14);
    cols[0] = path;
    cols[3] = algo;
    try {
      const Algorithm a = detail::algorithm_or_throw(algo);
      std::optional<std::size_t> lambda;
      if (!lambda_word.empty())
        lambda = detail::count_param({lambda_word}, 0, "lambda");
      std::filesystem::path file(path);
      if (file.is_relative())
        file = base / file;
      const Instance inst = parse_instance(detail::read_file(file.string())).to_instance();
      cols[1] = std::to_string(inst.size());
      cols[2] = std::to_string(inst.machines);
      const SolveReport r = detail::run_solver(inst, a, lambda, false);
      cols[5] = std::to_string(r.makespan);
      std::ostringstream ms;
      ms << std::fixed << std::setprecision(3) << r.wall_ms;
      cols[6] = ms.str();
      cols[7] = std::to_string(r.memo_hits);
      cols[8] = std::to_string(r.nodes);
      if (r.branch) {
        const TreeBoundsVerdict v = report_tree_bounds(*r.branch);
        cols[4] = std::to_string(r.branch->lambda);
        cols[9] = std::to_string(v.red_nonleaves);
        cols[10] = std::to_string(v.red_bound);
        cols[11] = std::to_string(v.max_height);
        cols[12] = std::to_string(v.height_bound);
      } else if (lambda) {
        cols[4] = std::to_string(*lambda);
      }
      cols[13] = "ok";
    } catch (const std::exception &e) {
      cols[13] = std::string("error: ") + e.what();
    }
    for (std::size_t i = 0; i < cols.size(); ++i)
      out << (i ? "," : "") << detail::csv_field(cols[i]);
    out << '\n';
  }
  return kOk;
}

/// Parses argv and dispatches to one subcommand.
inline int run(int argc, const char *const *argv, std::ostream &out,
               std::ostream &err) {
  CLI::App app{"Exact makespan minimisation for unit jobs with precedences"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto *solve_cmd = app.add_subcommand("solve", "Compute the optimal makespan");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--algo", solve.algo,
                        "brute | antichain-dp | subexp | subsetconv | auto");
  solve_cmd->add_option("--lambda", solve.lambda,
                        "Red-node threshold for the interval solver");
  solve_cmd->add_option("--witness", solve.witness, "Write an optimal schedule here");
  solve_cmd->add_option("--stats", solve.stats, "Write JSON counters here");

  GenArgs gen_args;
  auto *gen_cmd = app.add_subcommand("gen", "Print a generated instance");
  gen_cmd->add_option("--family", gen_args.family,
                      "chain | chains | outstar | antichain | random | grid | dks")
      ->required();
  gen_cmd->add_option("params", gen_args.params, "Family parameters");
  gen_cmd->add_option("--machines,-m", gen_args.machines, "Machine count");
  gen_cmd->add_option("--seed", gen_args.seed, "Random seed");

  std::string verify_instance, verify_schedule;
  auto *verify_cmd = app.add_subcommand("verify", "Check a schedule file");
  verify_cmd->add_option("instance", verify_instance, "Instance file")->required();
  verify_cmd->add_option("schedule", verify_schedule, "Schedule file")->required();

  std::string manifest;
  auto *bench_cmd = app.add_subcommand("bench", "Run a manifest and print CSV");
  bench_cmd->add_option("manifest", manifest, "Manifest file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kOk : kInputError;
  }
  if (gen_cmd->parsed() && gen_args.machines == 0) {
    err << "error: machine count must be at least 1\n";
    return kGuardViolation;
  }
  if (solve_cmd->parsed())
    return cmd_solve(solve, out, err);
  if (gen_cmd->parsed())
    return cmd_gen(gen_args, out, err);
  if (verify_cmd->parsed())
    return cmd_verify(verify_instance, verify_schedule, out, err);
  return cmd_bench(manifest, out, err);
}

} // namespace usched::cli
