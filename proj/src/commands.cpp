#include "qdepth/commands.hpp"

#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qdepth/verify.hpp"

namespace qdepth {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<int>(c));
        } else {
          out += c;
        }
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  }
  f << content;
  if (!f) {
    throw std::runtime_error(fmt::format("failed while writing '{}'", path.string()));
  }
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  return dir;
}

void persist_config(const std::filesystem::path& dir, const char* command, const RunConfig& cfg) {
  write_file(dir / fmt::format("{}_config.txt", command),
             fmt::format("# {}\n{}", provenance_line(cfg), cfg.serialize()));
}

std::vector<int> depth_range(const RunConfig& cfg) {
  if (cfg.p_min > cfg.p) {
    throw ConfigError(fmt::format("empty range: p-min = {} exceeds p = {}", cfg.p_min, cfg.p));
  }
  std::vector<int> range;
  for (int p = cfg.p_min; p <= cfg.p; ++p) range.push_back(p);
  return range;
}

void print_problem(std::ostream& out, const QaoaProblem& problem) {
  const auto& ex = problem.extrema();
  out << fmt::format("graph: {} nodes, {} edges; C_min = {:.6f} ({}), C_max = {:.6f}\n",
                     problem.graph().n_nodes, problem.graph().edges.size(), ex.c_min,
                     bitstring(ex.argmin, problem.graph().n_nodes), ex.c_max);
}

// Shared body of cmd_sweep and cmd_hybrid.
int run_sweep_command(const RunConfig& cfg, bool hybrid, std::ostream& out, std::ostream& err) {
  const char* name = hybrid ? "hybrid" : "sweep";
  const QaoaProblem problem = cfg.problem();
  print_problem(out, problem);
  const SweepResult result =
      run_lambda_sweep(problem, ControlSchedule::qaoa_uniform(cfg.p, cfg.x0),
                       cfg.optimizer_config(hybrid), cfg.lambda_schedule());

  const auto dir = prepare_out_dir(cfg);
  persist_config(dir, name, cfg);
  write_file(dir / fmt::format("{}.csv", name), sweep_csv(result, cfg, hybrid));
  write_file(dir / fmt::format("{}.json", name), sweep_json(result, cfg));

  for (const auto& rec : result.records) {
    if (!rec.ok()) {
      err << fmt::format("arm lambda = {} failed: {}\n", rec.lambda, *rec.failure);
    }
  }
  if (!result.best) {
    err << "all arms failed\n";
    return kExitRunFailure;
  }
  const ExperimentRecord& best = result.records[*result.best];
  out << fmt::format("best: lambda = {} selected_params = {} effective_depth = {} ratio = {:.6f}",
                     best.lambda, best.selected_params, best.effective_depth, best.ratio);
  if (best.phase2_ratio) out << fmt::format(" phase2_ratio = {:.6f}", *best.phase2_ratio);
  out << fmt::format("\nwrote {}\n", (dir / fmt::format("{}.csv", name)).string());
  return kExitOk;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRunFailure;
  }
}

}  // namespace

std::string baseline_csv(std::span<const BaselineRow> rows, const RunConfig& cfg) {
  std::string s = fmt::format("# {}\np,params,ratio,objective,seconds\n", provenance_line(cfg));
  for (const auto& r : rows) {
    s += fmt::format("{},{},{},{},{}\n", r.p, r.params, num(r.ratio), num(r.objective),
                     cfg.timing ? fmt::format("{:.3f}", r.seconds) : std::string());
  }
  return s;
}

std::string sweep_csv(const SweepResult& result, const RunConfig& cfg, bool hybrid) {
  std::string s = fmt::format("# {}\nlambda,selected_params,effective_depth,ratio,stopped_early{}\n",
                              provenance_line(cfg), hybrid ? ",phase2_ratio" : "");
  for (const auto& r : result.records) {
    const std::string ratio = r.ok() ? num(r.ratio) : std::string();
    s += fmt::format("{},{},{},{},{}", num(r.lambda), r.selected_params, r.effective_depth, ratio,
                     r.stopped_early ? "true" : "false");
    if (hybrid) s += "," + (r.phase2_ratio ? num(*r.phase2_ratio) : std::string());
    s += '\n';
  }
  return s;
}

std::string sweep_json(const SweepResult& result, const RunConfig& cfg) {
  std::string s = "{\n";
  s += fmt::format("  \"tool\": \"{}\",\n  \"tool_version\": \"{}\",\n", kToolName, kToolVersion);
  s += fmt::format("  \"config_hash\": \"{}\",\n", cfg.hash());
  s += fmt::format("  \"best_index\": {},\n",
                   result.best ? std::to_string(*result.best) : std::string("null"));
  s += "  \"records\": [";
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    s += i == 0 ? "\n" : ",\n";
    s += fmt::format("    {{\"lambda\": {}, \"x_final\": [", num(r.lambda));
    for (std::size_t k = 0; k < r.final_x.size(); ++k) {
      s += (k == 0 ? "" : ", ") + num(r.final_x[k]);
    }
    s += fmt::format("], \"selected_params\": {}, \"effective_depth\": {}", r.selected_params,
                     r.effective_depth);
    s += fmt::format(", \"ratio\": {}", r.ok() ? num(r.ratio) : std::string("null"));
    if (r.phase2_ratio) s += fmt::format(", \"phase2_ratio\": {}", num(*r.phase2_ratio));
    s += fmt::format(", \"stopped_early\": {}", r.stopped_early ? "true" : "false");
    if (r.failure) s += fmt::format(", \"error\": \"{}\"", json_escape(*r.failure));
    s += "}";
  }
  s += result.records.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

int cmd_baseline(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const std::vector<int> range = depth_range(cfg);
    const QaoaProblem problem = cfg.problem();
    print_problem(out, problem);
    OptimizerConfig opt = cfg.optimizer_config(false);
    const std::vector<BaselineRow> rows = exhaustive_depth_baseline(problem, opt, range, cfg.x0);
    const auto dir = prepare_out_dir(cfg);
    persist_config(dir, "baseline", cfg);
    write_file(dir / "baseline.csv", baseline_csv(rows, cfg));
    const auto top = std::max_element(rows.begin(), rows.end(),
                                      [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
    for (const auto& r : rows) {
      out << fmt::format("p = {:2d}  ratio = {:.6f}  objective = {:+.6f}\n", r.p, r.ratio,
                         r.objective);
    }
    out << fmt::format("best depth p = {} (ratio {:.6f})\nwrote {}\n", top->p, top->ratio,
                       (dir / "baseline.csv").string());
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    return run_sweep_command(cfg, false, out, err);
  });
}

int cmd_hybrid(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    return run_sweep_command(cfg, true, out, err);
  });
}

int cmd_gen_graph(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    const Graph graph = cfg.load_or_generate_graph();
    const auto dir = prepare_out_dir(cfg);
    const std::string text = serialize_graph(graph, provenance_line(cfg));
    write_file(dir / "graph.txt", text);
    out << text << fmt::format("wrote {}\n", (dir / "graph.txt").string());
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.validate();
    VerifyOptions opts;
    opts.dt = cfg.dt;
    opts.seed = cfg.seed;
    const std::vector<CheckResult> results = run_invariant_suite(opts);
    out << format_report(results);
    const bool all = std::all_of(results.begin(), results.end(),
                                 [](const CheckResult& r) { return r.passed; });
    return static_cast<int>(all ? kExitOk : kExitRunFailure);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth selection for noisy QAOA on weighted Max-Cut", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (command-line flags win)");
  app.allow_config_extras(false);
  app.option_defaults()->always_capture_default();

  RunConfig cfg;
  const std::vector<std::string> noise_kinds{"none", "relaxation", "dephasing"};
  const std::vector<std::string> methods{"exact", "rk4"};
  app.add_option("--graph", cfg.graph_path, "graph file (edge list); overrides the generator");
  app.add_option("--nodes", cfg.nodes, "generated graph: node count");
  app.add_option("--edges", cfg.edges, "generated graph: edge count");
  app.add_option("--weight-min", cfg.weight_min, "generated graph: smallest weight");
  app.add_option("--weight-max", cfg.weight_max, "generated graph: largest weight");
  app.add_option("--seed", cfg.seed, "generated graph: RNG seed");
  app.add_option("--noise", cfg.noise, "noise channel")->check(CLI::IsMember(noise_kinds));
  app.add_option("--coupling", cfg.coupling, "per-qubit coupling strength");
  app.add_option("--p", cfg.p, "initial depth (sweep) / largest depth (baseline)");
  app.add_option("--p-min", cfg.p_min, "smallest depth of the baseline range");
  app.add_option("--x0", cfg.x0, "initial value of every duration");
  app.add_option("--scale", cfg.scale, "factor applied to both Hamiltonians");
  app.add_option("--eta", cfg.eta, "step size");
  app.add_option("--epsilon", cfg.epsilon, "finite-difference perturbation");
  app.add_option("--iters", cfg.iters, "iterations per optimization run");
  app.add_option("--pg-iters", cfg.pg_iters, "hybrid: proximal iterations before plain descent");
  app.add_option("--lambda-init", cfg.lambda_init, "first regularization strength");
  app.add_option("--lambda-factor", cfg.lambda_factor, "shrink factor per round");
  app.add_option("--rounds", cfg.rounds, "maximum number of lambda rounds");
  // Parsed by hand so that "inf" (never compare, run one round) is accepted.
  app.add_option_function<std::string>(
         "--plateau-tol",
         [&cfg](const std::string& text) {
           std::size_t used = 0;
           try {
             cfg.plateau_tol = std::stod(text, &used);
           } catch (const std::exception&) {
             used = 0;
           }
           if (used == 0 || used != text.size()) {
             throw CLI::ValidationError("--plateau-tol", "not a number: " + text);
           }
         },
         "early-stop threshold on the ratio change (inf allowed)")
      ->default_str("0.01");
  app.add_option("--dt", cfg.dt, "RK4 step");
  app.add_option("--integrator", cfg.integrator, "segment propagation method")
      ->check(CLI::IsMember(methods));
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--jobs", cfg.jobs, "parallel objective evaluations per gradient");
  app.add_flag("--timing", cfg.timing, "record wall-clock seconds in baseline.csv");

  using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);
  Command selected = nullptr;
  const auto add = [&](const char* name, const char* help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&selected, fn] { selected = fn; });
  };
  add("baseline", "unregularized descent at every depth in [p-min, p]", &cmd_baseline);
  add("sweep", "proximal-gradient depth selection over a shrinking lambda grid", &cmd_sweep);
  add("hybrid", "proximal phase then plain descent on the pruned schedule", &cmd_hybrid);
  add("verify", "run the invariant suite", &cmd_verify);
  add("gen-graph", "write the seeded random graph", &cmd_gen_graph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitConfigError);
  }
  if (selected == nullptr) {
    err << "no command given\n";
    return kExitConfigError;
  }
  return selected(cfg, out, err);
}

}  // namespace qdepth
