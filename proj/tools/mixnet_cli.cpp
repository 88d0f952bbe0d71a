// mixnet: generate topologies, analyze route mixing, evaluate route attacks.
//
// exit codes: 0 ok, 1 runtime failure, 2 usage, 3 generation failure,
// 4 graph condition (disconnected, sink node, too large for exact mode)

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixnet/mixnet.hpp"

namespace fs = std::filesystem;
using namespace mixnet;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kGeneration = 3, kGraphCondition = 4 };

// bad flag values found after parsing
struct UsageError : Error {
  using Error::Error;
};

fs::path default_out_dir() {
  if (const char* env = std::getenv("MIXNET_OUT_DIR"); env && *env) return env;
  return ".";
}

fs::path resolve(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  return default_out_dir() / fallback;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const fs::path& p, const std::string& text) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Bookkeeping for one invocation; written as <main output>.manifest.json.
struct Manifest {
  std::string command;
  json config = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const fs::path& main_output) {
    const fs::path path = main_output.string() + ".manifest.json";
    outputs.push_back(path.string());
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["tool_version"] = kVersion;
    j["outputs"] = outputs;
    j["duration_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(path, dump(j));
  }
};

// Generator flags shared by `generate` and `spectral --model`.
struct ModelFlags {
  std::string model;
  std::size_t nodes = 0;
  double p = 0.0;
  std::size_t m = 0;
  std::optional<double> alpha;
  double beta = kDefaultSfrBeta;
  std::optional<double> mean_degree;
  std::size_t side = 0;
  std::size_t radius = 1;
  std::size_t q = 0;
  double r_exp = kDefaultKwsExponent;
  std::size_t degree = 0;

  void add_to(CLI::App* app) {
    app->add_option("--model", model, "er | ba | sfr | kws | regular")
        ->check(CLI::IsMember({"er", "ba", "sfr", "kws", "regular"}));
    app->add_option("--nodes,-n", nodes, "number of nodes (kws: a perfect square unless --side is given)");
    app->add_option("--p", p, "er: edge probability");
    app->add_option("--m", m, "ba: edges per new node");
    app->add_option("--alpha", alpha, "sfr: cutoff exponent, cutoff = floor(e^(alpha/beta))");
    app->add_option("--beta", beta, "sfr: power-law exponent")->capture_default_str();
    app->add_option("--mean-degree", mean_degree, "sfr: target mean degree (picks the cutoff)");
    app->add_option("--side", side, "kws: lattice side");
    app->add_option("--radius", radius, "kws: local contact radius")->capture_default_str();
    app->add_option("--q", q, "kws: long-range links per node");
    app->add_option("--r-exp", r_exp, "kws: long-range distance exponent")->capture_default_str();
    app->add_option("--degree", degree, "regular: node degree");
  }

  GeneratorConfig config(std::uint64_t seed) const {
    GeneratorConfig c;
    c.model = parse_model(model);
    c.seed = seed;
    c.n = nodes;
    c.p = p;
    c.m = m;
    c.alpha = alpha;
    c.beta = beta;
    c.mean_degree = mean_degree;
    c.radius = radius;
    c.q = q;
    c.r_exp = r_exp;
    c.degree = degree;
    if (c.model == Model::KWS) {
      c.side = side;
      if (c.side == 0) {
        const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(nodes))));
        if (s * s != nodes) throw UsageError("kws needs --nodes to be a perfect square or an explicit --side");
        c.side = s;
      }
      if (c.n == 0) c.n = c.side * c.side;
    }
    try {
      c.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

// Model name and parameters recorded next to a generated graph, if any.
std::pair<std::string, json> graph_provenance(const std::string& graph_path) {
  std::ifstream in(graph_path + ".manifest.json");
  if (in) {
    try {
      json j = json::parse(in);
      if (j.contains("config") && j["config"].contains("model")) return {j["config"]["model"].get<std::string>(), j["config"]};
    } catch (const json::exception&) {
      // unreadable manifest: fall through
    }
  }
  return {"file", json{{"path", graph_path}}};
}

Graph load_reporting_drops(const std::string& path, const LoadOptions& opt) {
  auto r = load_edge_list(path, opt);
  if (r.dropped.self_loops || r.dropped.duplicates)
    std::cerr << "warning: dropped " << r.dropped.self_loops << " self-loops and " << r.dropped.duplicates
              << " duplicate arcs\n";
  return std::move(r.graph);
}

struct GraphFlags {
  std::string path;
  bool directed = false;
  bool giant = false;

  void add_to(CLI::App* app, bool with_giant) {
    app->add_option("--graph,-g", path, "edge list file")->required()->check(CLI::ExistingFile);
    app->add_flag("--directed", directed, "treat the edge list as directed (overrides the file header)");
    if (with_giant) app->add_flag("--giant-component", giant, "restrict to the largest connected component");
  }

  Graph load(bool require_connected) const {
    LoadOptions opt;
    if (directed) opt.directed = true;
    Graph g = load_reporting_drops(path, opt);
    if (giant) {
      auto comp = giant_component(g);
      std::cerr << "giant component: " << comp.graph.node_count() << " of " << g.node_count() << " nodes\n";
      return std::move(comp.graph);
    }
    if (require_connected && !is_connected(g)) {
      std::size_t count = 0;
      component_labels(g, &count);
      throw GraphConditionError("graph is disconnected (" + std::to_string(count) +
                                " components); rerun with --giant-component");
    }
    return g;
  }
};

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

// ---- generate --------------------------------------------------------------

struct GenerateCmd {
  ModelFlags model;
  std::uint64_t seed = 1;
  std::string out;

  void setup(CLI::App& root) {
    auto* c = root.add_subcommand("generate", "generate a topology and write it as an edge list");
    model.add_to(c);
    c->get_option("--model")->required();
    c->get_option("--nodes")->required();
    c->add_option("--seed", seed, "root seed")->capture_default_str();
    c->add_option("--out,-o", out, "output edge list (default: $MIXNET_OUT_DIR/<model>-n<n>-s<seed>.edges)");
    c->callback([this] { run(); });
  }

  void run() {
    Manifest man{"generate"};
    const GeneratorConfig cfg = model.config(seed);
    man.config = to_json(cfg);
    man.seed = seed;
    const fs::path path = resolve(out, model.model + "-n" + std::to_string(cfg.n) + "-s" + std::to_string(seed) + ".edges");
    Graph g = generate(cfg);
    ensure_parent(path);
    save_edge_list(g, path.string());
    man.outputs.push_back(path.string());
    man.write(path);
    const auto st = degree_stats(g);
    std::cout << "wrote " << path.string() << ": n=" << g.node_count() << " edges=" << g.edge_count()
              << " mean_degree=" << st.mean << " max_degree=" << st.max << "\n";
  }
};

// ---- analyze ---------------------------------------------------------------

struct AnalyzeCmd {
  GraphFlags graph;
  std::size_t t_max = 100;
  std::string criterion = "entropy-gap";
  std::optional<double> threshold;
  bool lazy = false;
  std::string q0 = "random-starts";
  std::size_t starts = 100;
  std::uint64_t seed = 1;
  std::string out;

  void setup(CLI::App& root) {
    auto* c = root.add_subcommand("analyze", "entropy and relative distance of routes against length");
    graph.add_to(c, true);
    c->add_option("--t-max", t_max, "longest route evaluated")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--criterion", criterion, "entropy-gap | rpd")
        ->capture_default_str()
        ->check(CLI::IsMember({"entropy-gap", "rpd"}));
    c->add_option("--threshold", threshold, "bits below maximum (entropy-gap) or Delta bound (rpd)");
    c->add_flag("--lazy", lazy, "lazy walk (stay put with probability 1/2)");
    c->add_option("--q0", q0, "random-starts | uniform | node:<id>")->capture_default_str();
    c->add_option("--starts", starts, "insertion nodes averaged by random-starts")->capture_default_str();
    c->add_option("--seed", seed, "seed for insertion nodes")->capture_default_str();
    c->add_option("--out,-o", out, "report JSON (trace CSV goes next to it)");
    c->callback([this] { run(); });
  }

  void run() {
    Manifest man{"analyze"};
    man.seed = seed;
    ConvergenceCriterion crit = criterion == "rpd" ? ConvergenceCriterion::relative_distance()
                                                   : ConvergenceCriterion::entropy_gap();
    if (threshold) {
      if (!(*threshold > 0.0)) throw UsageError("--threshold must be > 0");
      crit.threshold = *threshold;
    }
    const Graph g = graph.load(true);
    const TransitionMatrix P(g, lazy);
    Distribution pi;
    try {
      pi = P.reversible() ? degree_stationary(P) : stationary(P);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(std::string("no stationary distribution; rerun with --lazy: ") + e.what(), e.residual());
    }

    ConvergenceReport rep;
    if (q0 == "random-starts") {
      if (starts == 0) throw UsageError("--starts must be >= 1");
      auto nodes = random_starts(g.node_count(), starts, seed);
      rep = mean_convergence_profile(P, pi, nodes, t_max, crit);
    } else if (q0 == "uniform") {
      rep = convergence_profile(P, pi, Distribution::uniform(g.node_count()), t_max, crit);
    } else if (q0.rfind("node:", 0) == 0) {
      std::uint64_t id = 0;
      try {
        id = std::stoull(q0.substr(5));
      } catch (const std::logic_error&) {
        throw UsageError("bad --q0 node id: " + q0);
      }
      if (id >= g.node_count()) throw UsageError("--q0 node id out of range");
      rep = convergence_profile(P, pi, Distribution::point_mass(g.node_count(), static_cast<NodeId>(id)), t_max, crit);
    } else {
      throw UsageError("--q0 must be random-starts, uniform or node:<id>");
    }

    auto [model, params] = graph_provenance(graph.path);
    json j = to_json(rep, model, params, seed);
    j["graph"] = {{"path", graph.path}, {"nodes", g.node_count()}, {"directed", g.directed()}, {"lazy", lazy}};
    j["q0"] = q0;

    const fs::path json_path = resolve(out, stem_of(graph.path) + ".analysis.json");
    fs::path csv_path = json_path;
    csv_path.replace_extension(".trace.csv");
    write_text(json_path, dump(j));
    std::ostringstream csv;
    write_trace_csv(rep, csv);
    write_text(csv_path, csv.str());

    man.config = {{"graph", graph.path}, {"t_max", t_max}, {"criterion", to_json(crit)}, {"lazy", lazy},
                  {"q0", q0}, {"starts", starts}, {"giant_component", graph.giant}};
    man.outputs = {json_path.string(), csv_path.string()};
    man.write(json_path);

    std::cout << "max_anonymity_bits=" << rep.max_anonymity_bits << " t_converge="
              << (rep.t_converge ? std::to_string(*rep.t_converge) : std::string("not reached")) << "\n";
    if (rep.oscillation_detected) std::cerr << "warning: Delta(t) is not decreasing; the chain may be periodic, try --lazy\n";
  }
};

// ---- attack ----------------------------------------------------------------

std::vector<NodeId> read_node_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<NodeId> nodes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      if (tok[0] == '#') break;
      try {
        nodes.push_back(static_cast<NodeId>(std::stoul(tok)));
      } catch (const std::logic_error&) {
        throw ParseError("bad node id '" + tok + "' in " + path, lineno);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

struct CompromiseCmd {
  GraphFlags graph;
  std::optional<std::size_t> top_k, random_k;
  std::string nodes_file;
  std::vector<std::size_t> lengths{3, 4, 5, 6};
  std::size_t walks = 100'000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool bounds = true;
  std::string out;

  void setup(CLI::App* attack) {
    auto* c = attack->add_subcommand("compromise", "fraction of routes made only of compromised mixes");
    graph.add_to(c, true);
    auto* tk = c->add_option("--top-k", top_k, "compromise the k highest-degree nodes");
    auto* nf = c->add_option("--nodes-file", nodes_file, "compromise the node ids listed in a file");
    auto* rk = c->add_option("--random-k", random_k, "compromise k uniformly chosen nodes");
    tk->excludes(nf)->excludes(rk);
    nf->excludes(rk);
    c->add_option("--length", lengths, "route lengths (mixes per route)")->delimiter(',')->capture_default_str();
    c->add_option("--walks", walks, "simulated routes per length")->capture_default_str();
    c->add_option("--seed", seed, "root seed")->capture_default_str();
    c->add_option("--threads", threads, "walk workers")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_flag("!--no-bounds", bounds, "skip the stationary mass, gap and walk-escape bound");
    c->add_option("--out,-o", out, "report JSON");
    c->callback([this] { run(); });
  }

  void run() {
    if (!top_k && !random_k && nodes_file.empty()) throw UsageError("one of --top-k, --nodes-file, --random-k is required");
    if (walks == 0) throw UsageError("--walks must be >= 1");
    for (auto l : lengths)
      if (l == 0) throw UsageError("--length values must be >= 1");
    Manifest man{"attack compromise"};
    man.seed = seed;
    const Graph g = graph.load(false);

    AttackReport rep;
    try {
      if (top_k) rep.compromised = top_degree_nodes(g, *top_k);
      else if (random_k) rep.compromised = random_nodes(g, *random_k, seed);
      else rep.compromised = read_node_file(nodes_file);
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    for (NodeId u : rep.compromised)
      if (u >= g.node_count()) throw UsageError("compromised node " + std::to_string(u) + " out of range");

    for (auto l : lengths)
      rep.estimates.push_back(simulate_compromise(g, {rep.compromised, l, walks, seed, threads}));

    if (bounds && !g.directed() && is_connected(g)) {
      const TransitionMatrix P(g);
      const Distribution pi = degree_stationary(P);
      rep.pi_mass = set_mass(pi, rep.compromised);
      rep.gap = std::clamp(1.0 - lambda2_estimate(P, pi).lambda2, 0.0, 1.0);
      for (auto l : lengths) rep.gilbert_bounds.push_back(gilbert_bound(*rep.pi_mass, *rep.gap, l));
    }

    json j = to_json(rep);
    auto [model, params] = graph_provenance(graph.path);
    j["model"] = model;
    j["params"] = params;
    j["seed"] = seed;
    j["threads"] = threads;
    const fs::path path = resolve(out, stem_of(graph.path) + ".compromise.json");
    write_text(path, dump(j));

    man.config = {{"graph", graph.path}, {"lengths", lengths}, {"walks", walks}, {"threads", threads},
                  {"selection", top_k ? "top-k" : random_k ? "random-k" : "nodes-file"},
                  {"k", rep.compromised.size()}};
    man.outputs = {path.string()};
    man.write(path);
    for (const auto& e : rep.estimates)
      std::cout << "length=" << e.walk_length << " fraction=" << e.fraction << " ci95=" << e.ci95 << "\n";
  }
};

struct BatchCmd {
  GraphFlags graph;
  double f = 5.0;
  std::string out;

  void setup(CLI::App* attack) {
    auto* c = attack->add_subcommand("batch-size", "messages per flush needed to use every outgoing link");
    graph.add_to(c, false);
    c->add_option("--f", f, "tolerated deviation, in percent")->capture_default_str();
    c->add_option("--out,-o", out, "report JSON (a one-row CSV goes next to it)");
    c->callback([this] { run(); });
  }

  void run() {
    if (!(f > 0.0)) throw UsageError("--f must be > 0");
    Manifest man{"attack batch-size"};
    const Graph g = graph.load(false);
    AttackReport rep;
    rep.batch = network_batch_size(g, f);
    auto [model, params] = graph_provenance(graph.path);
    json j = to_json(rep);
    j["model"] = model;
    j["params"] = params;
    j["f"] = f;

    const fs::path path = resolve(out, stem_of(graph.path) + ".batch.json");
    fs::path csv_path = path;
    csv_path.replace_extension(".csv");
    write_text(path, dump(j));
    std::ostringstream csv;
    write_batch_csv_header(csv);
    write_batch_csv_row(csv, model, params.dump(), *rep.batch);
    write_text(csv_path, csv.str());

    man.config = {{"graph", graph.path}, {"f", f}};
    man.outputs = {path.string(), csv_path.string()};
    man.write(path);
    std::cout << "max_degree=" << rep.batch->max_degree << " p_min=" << rep.batch->p_min
              << " batch_size=" << rep.batch->batch_size << "\n";
  }
};

// ---- spectral --------------------------------------------------------------

struct SpectralCmd {
  std::string graph_path;
  bool directed = false;
  ModelFlags model;
  std::uint64_t seed = 1;
  std::vector<std::size_t> sizes;
  std::size_t trials = 5;
  bool conductance = false;
  bool lazy = false;
  double tol = SpectralOptions{}.tol;
  std::size_t max_iter = SpectralOptions{}.max_iter;
  std::string out;

  void setup(CLI::App& root) {
    auto* c = root.add_subcommand("spectral", "second eigenvalue, conductance and size sweeps");
    auto* go = c->add_option("--graph,-g", graph_path, "edge list file")->check(CLI::ExistingFile);
    c->add_flag("--directed", directed, "treat the edge list as directed");
    model.add_to(c);
    go->excludes(c->get_option("--model"));
    c->add_option("--seed", seed, "root seed for generated graphs")->capture_default_str();
    c->add_option("--size-sweep", sizes, "comma-separated sizes for the template model")->delimiter(',');
    c->add_option("--trials", trials, "graphs per size")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_flag("--conductance", conductance, "exact conductance by enumeration (n <= 24)");
    c->add_flag("--lazy", lazy, "lazy walk");
    c->add_option("--tol", tol, "power-iteration tolerance")->capture_default_str();
    c->add_option("--max-iter", max_iter, "power-iteration limit")->capture_default_str();
    c->add_option("--out,-o", out, "report JSON");
    c->callback([this] { run(); });
  }

  void run() {
    if (graph_path.empty() && model.model.empty()) throw UsageError("spectral needs --graph or --model");
    if (!sizes.empty() && model.model.empty()) throw UsageError("--size-sweep needs a --model template");
    Manifest man{"spectral"};
    man.seed = seed;
    const SpectralOptions opt{tol, max_iter, seed};
    json j;
    std::string name;

    if (!sizes.empty()) {
      ModelFlags tmpl = model;
      if (tmpl.nodes == 0) tmpl.nodes = sizes.front();
      if (tmpl.model == "kws" && tmpl.side == 0) {
        tmpl.side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(tmpl.nodes))));
        tmpl.nodes = tmpl.side * tmpl.side;
      }
      const GeneratorConfig cfg = tmpl.config(seed);
      const SizeSweep sweep = lambda2_size_experiment(cfg, sizes, trials, opt);
      j = to_json(sweep);
      j["model"] = to_json(cfg);
      j["trials"] = trials;
      man.config = {{"model", to_json(cfg)}, {"sizes", sizes}, {"trials", trials}};
      name = model.model + "-sweep";
      for (const auto& r : sweep.rows) std::cout << "n=" << r.n << " mean_lambda2=" << r.mean_lambda2 << " sd=" << r.stddev << "\n";
      std::cout << "spread=" << sweep.spread() << "\n";
    } else {
      Graph g;
      if (!graph_path.empty()) {
        LoadOptions lo;
        if (directed) lo.directed = true;
        g = load_reporting_drops(graph_path, lo);
        name = stem_of(graph_path);
        man.config = {{"graph", graph_path}};
      } else {
        const GeneratorConfig cfg = model.config(seed);
        g = generate(cfg);
        name = model.model + "-n" + std::to_string(cfg.n);
        man.config = {{"model", to_json(cfg)}};
      }
      if (conductance && g.node_count() > kMaxConductanceNodes)
        throw UsageError("--conductance is exact and limited to " + std::to_string(kMaxConductanceNodes) +
                         " nodes (graph has " + std::to_string(g.node_count()) + ")");
      if (!is_connected(g)) throw GraphConditionError("graph is disconnected; lambda2 is 1");
      const TransitionMatrix P(g, lazy);
      const Distribution pi = P.reversible() ? degree_stationary(P) : stationary(P);
      const SpectralSummary s = lambda2_estimate(P, pi, opt);
      j = to_json(s);
      j["nodes"] = g.node_count();
      j["lazy"] = lazy;
      std::cout << "lambda2=" << s.lambda2 << " gap=" << s.gap << " method=" << to_string(s.method)
                << (s.converged ? "" : " (not converged)") << "\n";
      if (conductance) {
        const double phi = conductance_exact(g);
        const auto b = conductance_bounds(phi);
        const bool ok = b.contains(s.lambda2, 1e-9);
        j["conductance"] = {{"phi", phi}, {"lower", b.lower}, {"upper", b.upper}, {"bound_holds", ok}};
        std::cout << "phi=" << phi << " bounds=[" << b.lower << ", " << b.upper << "] " << (ok ? "holds" : "VIOLATED")
                  << "\n";
      }
    }
    man.config["lazy"] = lazy;
    man.config["tol"] = tol;
    const fs::path path = resolve(out, name + ".spectral.json");
    write_text(path, dump(j));
    man.outputs = {path.string()};
    man.write(path);
  }
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const ParseError*>(&e))
    return kUsage;
  if (dynamic_cast<const GenerationError*>(&e)) return kGeneration;
  if (dynamic_cast<const GraphConditionError*>(&e)) return kGraphCondition;
  return kFailure;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mix network topology analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  GenerateCmd gen;
  AnalyzeCmd analyze;
  CompromiseCmd compromise;
  BatchCmd batch;
  SpectralCmd spectral;
  gen.setup(app);
  analyze.setup(app);
  auto* attack = app.add_subcommand("attack", "passive attacks on route selection");
  attack->require_subcommand(1);
  compromise.setup(attack);
  batch.setup(attack);
  spectral.setup(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << one_line(e.what()) << "\n";
    const CLI::App* sub = &app;
    for (auto* s : app.get_subcommands()) {
      sub = s;
      for (auto* s2 : s->get_subcommands()) sub = s2;
    }
    std::cerr << sub->help();
    return kUsage;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* kind = code == kUsage ? "usage" : code == kGeneration ? "generation" : code == kGraphCondition ? "graph" : "failure";
    std::cerr << "error: " << kind << ": " << one_line(e.what()) << "\n";
    return code;
  }
  return kOk;
}
