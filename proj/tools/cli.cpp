#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "percolab/bounds.hpp"
#include "percolab/critical.hpp"
#include "percolab/csv.hpp"
#include "percolab/errors.hpp"
#include "percolab/estimators.hpp"
#include "percolab/exact.hpp"
#include "percolab/graph.hpp"
#include "percolab/parallel.hpp"
#include "percolab/rng.hpp"
#include "percolab/suites.hpp"
#include "percolab/triangle.hpp"

#ifndef PERCOLAB_VERSION
#define PERCOLAB_VERSION "unknown"
#endif

namespace percolab::cli {

namespace {

using json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects everything a command writes so that files are only touched once
// the command has succeeded, and so the manifest can hash them.
class Outputs {
 public:
  explicit Outputs(std::ostream& console) : console_(console) {}

  void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
      console_ << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
    if (!f) throw ConfigError("write to '" + path + "' failed");
    files_.push_back({path, text.size(), hex64(fnv1a(text))});
  }

  json inventory() const {
    json arr = json::array();
    for (const auto& f : files_) arr.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.hash}});
    return arr;
  }

 private:
  struct File {
    std::string path;
    std::size_t bytes;
    std::string hash;
  };
  std::ostream& console_;
  std::vector<File> files_;
};

SamplingMode parse_mode(const std::string& s) {
  if (s == "auto") return SamplingMode::kAuto;
  if (s == "edge-keyed") return SamplingMode::kEdgeKeyed;
  if (s == "skip") return SamplingMode::kSkip;
  throw ConfigError("unknown sampling mode '" + s + "' (expected auto, edge-keyed, skip)");
}

struct Common {
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string mode = "auto";
  std::string out;
  std::string manifest;

  RunOptions run() const {
    RunOptions r;
    r.workers = workers;
    r.mode = parse_mode(mode);
    return r;
  }
};

void add_common(CLI::App* app, Common& c, bool sampling) {
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--workers", c.workers, "Worker threads (0: PERCOLAB_WORKERS, else all cores)");
  if (sampling) app->add_option("--mode", c.mode, "Bond sampling: auto, edge-keyed, skip")->capture_default_str();
  app->add_option("--out", c.out, "Output file (default stdout)");
  app->add_option("--manifest", c.manifest, "Write a run manifest (JSON) to this path");
}

// --config FILE supplies defaults for options not given on the command line.
// The file is a flat JSON object keyed by long option names, or a manifest
// written by a previous run (its "config" member is used).
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.contains("config")) j = j["config"];
  if (!j.is_object()) throw ConfigError("config '" + path + "' must be a JSON object");
  auto given = [&](const std::string& key) {
    for (const auto& a : args) {
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    }
    return false;
  };
  for (const auto& [key, value] : j.items()) {
    if (given(key)) continue;
    std::string text;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
      continue;
    } else if (value.is_array()) {
      for (const auto& v : value) {
        if (!text.empty()) text += ',';
        text += v.is_string() ? v.get<std::string>() : v.dump();
      }
    } else if (value.is_string()) {
      text = value.get<std::string>();
    } else {
      text = value.dump();
    }
    args.push_back("--" + key + "=" + text);
  }
  return args;
}

// Effective options of a subcommand, in declaration order.
json effective_config(const CLI::App* app) {
  json j = json::object();
  for (const CLI::Option* opt : app->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "manifest") continue;
    if (opt->get_expected_min() == 0) {
      if (opt->count() > 0) j[name] = true;
      continue;
    }
    if (opt->count() > 0) {
      const auto& res = opt->results();
      std::string joined;
      for (const auto& r : res) {
        if (!joined.empty()) joined += ',';
        joined += r;
      }
      j[name] = joined;
    } else if (!opt->get_default_str().empty()) {
      j[name] = opt->get_default_str();
    }
  }
  return j;
}

void write_manifest(const std::string& path, const std::string& command, const CLI::App* app, const Common& c,
                    const json& stage_seeds, const Outputs& outputs, double wall_seconds) {
  if (path.empty()) return;
  json m;
  m["command"] = command;
  m["config"] = effective_config(app);
  m["config_hash"] = hex64(fnv1a(m["config"].dump()));
  m["code_version"] = PERCOLAB_VERSION;
  m["master_seed"] = c.seed;
  m["workers"] = resolve_workers(c.workers);
  m["stage_seeds"] = stage_seeds;
  m["files"] = outputs.inventory();
  m["wall_time_seconds"] = wall_seconds;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write manifest '" + path + "'");
  f << m.dump(2) << '\n';
}

PcResult load_pc(const std::string& path) { return pc_from_json(read_file(path)); }

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"percolab: bond percolation on high-dimensional tori and complete graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PERCOLAB_VERSION);

  // graph-info
  std::string gi_spec;
  auto* gi = app.add_subcommand("graph-info", "Print V, Omega, edge count and family parameters");
  gi->add_option("spec", gi_spec, "Graph spec, e.g. hypercube:n=14")->required();

  // scan
  Common sc;
  std::string sc_graph, sc_pc;
  std::vector<double> sc_p, sc_Lambda;
  std::vector<std::string> sc_obs{"chi"};
  std::uint64_t sc_samples = 1000;
  double sc_lambda = 0.1;
  auto* scan = app.add_subcommand("scan", "Estimate observables over a p grid or a window (Lambda) grid");
  scan->add_option("--graph", sc_graph, "Graph spec")->required();
  auto* scan_p = scan->add_option("--p", sc_p, "Comma-separated p values")->delimiter(',');
  auto* scan_L = scan->add_option("--Lambda", sc_Lambda, "Comma-separated Lambda values (p = p_c + Lambda/(Omega V^{1/3}))")
                     ->delimiter(',');
  scan_p->excludes(scan_L);
  scan->add_option("--pc", sc_pc, "p_c JSON from find-pc (for --Lambda; otherwise p_c is solved first)");
  scan->add_option("--lambda", sc_lambda, "lambda used when solving p_c for --Lambda")
      ->default_str(format_double(sc_lambda));
  scan->add_option("--observables", sc_obs, "chi, cmax, root_size, P_geq:k, Z_geq:k, var_Z_geq:k, M:gamma, ...")
      ->delimiter(',')
      ->capture_default_str();
  scan->add_option("--samples", sc_samples, "Replicas per p")->capture_default_str();
  add_common(scan, sc, true);

  // find-pc
  Common fp;
  std::string fp_graph;
  PcOptions fp_opt;
  auto* find = app.add_subcommand("find-pc", "Solve chi(p_c) = lambda V^{1/3} by stochastic bisection");
  find->add_option("--graph", fp_graph, "Graph spec")->required();
  find->add_option("--lambda", fp_opt.lambda, "lambda")->default_str(format_double(fp_opt.lambda));
  find->add_option("--rel-tol", fp_opt.rel_tol, "Relative bracket width at which to stop")
      ->default_str(format_double(fp_opt.rel_tol));
  find->add_option("--confidence", fp_opt.confidence, "Per-comparison confidence before Bonferroni")
      ->default_str(format_double(fp_opt.confidence));
  find->add_option("--budget", fp_opt.budget, "Total replica budget")->capture_default_str();
  find->add_option("--samples", fp_opt.initial_samples, "Initial replicas per midpoint")->capture_default_str();
  find->add_option("--max-per-point", fp_opt.max_samples_per_point, "Replica cap per midpoint")->capture_default_str();
  // Defaults are recorded in manifests, so doubles are written round-trip exact.
  find->add_option("--exponent", fp_opt.exponent, "Exponent in the target lambda V^exponent")
      ->default_str(format_double(fp_opt.exponent));
  add_common(find, fp, true);

  // triangle
  Common tr;
  std::string tr_graph, tr_pc;
  std::optional<double> tr_p;
  std::uint64_t tr_samples = 1000;
  bool tr_exact = false;
  double tr_a0 = -1.0;
  auto* tri = app.add_subcommand("triangle", "Two-point function and triangle diagram at one p");
  tri->add_option("--graph", tr_graph, "Graph spec")->required();
  auto* tri_p = tri->add_option("--p", tr_p, "Bond probability");
  auto* tri_pc = tri->add_option("--pc", tr_pc, "p_c JSON; evaluates at its p_c estimate");
  tri_p->excludes(tri_pc);
  tri->add_option("--samples", tr_samples, "Replicas")->capture_default_str();
  tri->add_flag("--exact", tr_exact, "Use exact enumeration (at most 24 edges)");
  tri->add_option("--a0", tr_a0, "Also report the triangle-condition verdict for this a0");
  add_common(tri, tr, true);

  // magnetization
  Common mg;
  std::string mg_graph;
  std::vector<double> mg_p, mg_gamma;
  std::uint64_t mg_samples = 1000;
  auto* mag = app.add_subcommand("magnetization", "Estimate M, chi(p,gamma) and chi_perp over p and gamma grids");
  mag->add_option("--graph", mg_graph, "Graph spec")->required();
  mag->add_option("--p", mg_p, "Comma-separated p values")->delimiter(',')->required();
  mag->add_option("--gamma", mg_gamma, "Comma-separated gamma values")->delimiter(',')->required();
  mag->add_option("--samples", mg_samples, "Replicas per p")->capture_default_str();
  add_common(mag, mg, true);

  // oracle
  Common orc;
  std::string or_graph;
  double or_p = 0.5;
  std::vector<double> or_gamma;
  auto* oracle = app.add_subcommand("oracle", "Exact observables by enumeration of all bond configurations");
  oracle->add_option("--graph", or_graph, "Graph spec (at most 24 edges)")->required();
  oracle->add_option("--p", or_p, "Bond probability")->required();
  oracle->add_option("--gamma", or_gamma, "Comma-separated gamma values")->delimiter(',');
  add_common(oracle, orc, false);

  // validate
  Common va;
  SuiteConfig va_cfg;
  std::string va_json;
  bool va_list = false;
  auto* validate = app.add_subcommand("validate", "Run a bound-checking suite");
  validate->add_option("--suite", va_cfg.suite, "Suite name (see --list)");
  validate->add_flag("--list", va_list, "List available suites");
  validate->add_option("--samples", va_cfg.n_samples, "Replicas per estimate (0: suite default)");
  validate->add_option("--lambda", va_cfg.lambda, "lambda (0: suite default)");
  validate->add_option("--rel-tol", va_cfg.rel_tol, "p_c relative tolerance (0: suite default)");
  validate->add_option("--json", va_json, "Write the JSON report to this path");
  add_common(validate, va, false);

  try {
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    for (auto* sub : app.get_subcommands()) out << sub->help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << PERCOLAB_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  Outputs outputs(out);

  try {
    if (gi->parsed()) {
      const Graph g = parse_graph_spec(gi_spec);
      out << "family=" << family_name(g.family()) << " params=" << g.params() << " V=" << g.V()
          << " Omega=" << g.degree() << " edges=" << g.edge_count()
          << " translations=" << (g.has_translations() ? "yes" : "no") << '\n';
      return 0;
    }

    if (scan->parsed()) {
      const Graph g = parse_graph_spec(sc_graph);
      const RunOptions run = sc.run();
      json seeds = json::object();
      std::vector<double> ps = sc_p;
      if (!sc_Lambda.empty()) {
        PcResult pc;
        if (!sc_pc.empty()) {
          pc = load_pc(sc_pc);
          if (pc.graph != g.spec()) throw ConfigError("p_c file is for " + pc.graph + ", not " + g.spec());
        } else {
          PcOptions opt;
          opt.lambda = sc_lambda;
          opt.run = run;
          const std::uint64_t s = derive_seed(sc.seed, "find-pc");
          seeds["find-pc"] = s;
          pc = solve_pc(g, opt, s);
        }
        for (double L : sc_Lambda) ps.push_back(p_from_Lambda(g, pc.p_c_hat, L));
      }
      if (ps.empty()) throw ConfigError("scan needs --p or --Lambda");
      struct Col {
        std::string name, param;
        ObservableSpec spec;
        bool variance;
      };
      std::vector<Col> cols;
      for (const auto& o : sc_obs) {
        const bool var = o.rfind("var_Z_geq:", 0) == 0;
        const ObservableSpec spec = parse_observable(var ? o.substr(4) : o);
        const auto colon = o.find(':');
        cols.push_back({var ? "var_Z_geq" : observable_name(spec.kind),
                        colon == std::string::npos ? "" : o.substr(colon + 1), spec, var});
      }
      std::vector<ObservableSpec> specs;
      for (const auto& c : cols) specs.push_back(c.spec);
      seeds["scan"] = sc.seed;
      std::ostringstream csv;
      csv << kEstimateCsvHeader << '\n';
      for (double p : ps) {
        const ReplicaMatrix m = sample_observables(g, p, specs, sc_samples, sc.seed, run);
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const Estimate e = cols[c].variance ? m.variance(c) : m.mean(c);
          write_estimate_row(csv, g, p, cols[c].name, cols[c].param, e);
        }
      }
      outputs.emit(sc.out, csv.str());
      write_manifest(sc.manifest, "scan", scan, sc, seeds, outputs, elapsed());
      return 0;
    }

    if (find->parsed()) {
      const Graph g = parse_graph_spec(fp_graph);
      fp_opt.run = fp.run();
      const PcResult pc = solve_pc(g, fp_opt, fp.seed);
      outputs.emit(fp.out, pc_to_json(pc) + "\n");
      write_manifest(fp.manifest, "find-pc", find, fp, json{{"find-pc", fp.seed}}, outputs, elapsed());
      return 0;
    }

    if (tri->parsed()) {
      const Graph g = parse_graph_spec(tr_graph);
      double p;
      if (tr_p) {
        p = *tr_p;
      } else if (!tr_pc.empty()) {
        p = load_pc(tr_pc).p_c_hat;
      } else {
        throw ConfigError("triangle needs --p or --pc");
      }
      TriangleReport r;
      if (tr_exact) {
        const ExactEnumerator e(g, tr.workers);
        r = triangle_from_matrix(e.stats(p).tau, g, p);
      } else {
        const TwoPointTable t = estimate_two_point(g, p, tr_samples, tr.seed, tr.run());
        r = triangle_from_two_point(t, g);
      }
      json j = json::parse(triangle_to_json(r));
      if (tr_a0 >= 0.0) {
        const TriangleVerdict v = check_triangle_condition(r, tr_a0);
        j["triangle_condition"] = {{"a0", v.a0}, {"holds", v.holds}, {"diag_margin", v.diag_margin},
                                   {"off_margin", v.off_margin}};
      }
      outputs.emit(tr.out, j.dump(2) + "\n");
      write_manifest(tr.manifest, "triangle", tri, tr, json{{"triangle", tr.seed}}, outputs, elapsed());
      return 0;
    }

    if (mag->parsed()) {
      const Graph g = parse_graph_spec(mg_graph);
      std::vector<ObservableSpec> specs;
      for (double gamma : mg_gamma) {
        specs.push_back({Observable::kMagnetization, gamma});
        specs.push_back({Observable::kChiGamma, gamma});
        specs.push_back({Observable::kChiPerp, gamma});
      }
      std::ostringstream csv;
      csv << kEstimateCsvHeader << '\n';
      for (double p : mg_p) {
        const ReplicaMatrix m = sample_observables(g, p, specs, mg_samples, mg.seed, mg.run());
        for (std::size_t c = 0; c < specs.size(); ++c) {
          write_estimate_row(csv, g, p, observable_name(specs[c].kind), format_double(specs[c].param), m.mean(c));
        }
      }
      outputs.emit(mg.out, csv.str());
      write_manifest(mg.manifest, "magnetization", mag, mg, json{{"magnetization", mg.seed}}, outputs, elapsed());
      return 0;
    }

    if (oracle->parsed()) {
      const Graph g = parse_graph_spec(or_graph);
      const auto [stats, mags] = enumerate_exact(g, or_p, or_gamma);
      outputs.emit(orc.out, exact_to_json(stats, mags) + "\n");
      write_manifest(orc.manifest, "oracle", oracle, orc, json::object(), outputs, elapsed());
      return 0;
    }

    if (validate->parsed()) {
      if (va_list) {
        for (const auto& [name, desc] : available_suites()) out << name << "  " << desc << '\n';
        return 0;
      }
      va_cfg.seed = va.seed;
      va_cfg.workers = va.workers;
      const SuiteReport rep = run_suite(va_cfg);
      std::ostringstream table;
      for (const auto& n : rep.notes) table << "# " << n << '\n';
      print_checks_table(table, rep.checks);
      outputs.emit(va.out, table.str());
      if (!va_json.empty()) outputs.emit(va_json, suite_to_json(rep) + "\n");
      write_manifest(va.manifest, "validate", validate, va, json{{"validate", va.seed}}, outputs, elapsed());
      return rep.exit_code();
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedFamily& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace percolab::cli
