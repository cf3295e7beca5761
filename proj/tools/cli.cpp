#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "interlace/builders.hpp"
#include "interlace/graph_io.hpp"
#include "interlace/percolation.hpp"
#include "interlace/potential.hpp"
#include "interlace/sampler.hpp"
#include "interlace/tree_exact.hpp"
#include "interlace/validation.hpp"

namespace interlace::cli {

using Json = nlohmann::ordered_json;

const char* to_string(CliErrc code) noexcept {
  switch (code) {
    case CliErrc::UnknownFlag: return "UnknownFlag";
    case CliErrc::MissingParameter: return "MissingParameter";
    case CliErrc::ConflictingSources: return "ConflictingSources";
    case CliErrc::InvalidValue: return "InvalidValue";
    case CliErrc::HelpRequested: return "HelpRequested";
  }
  return "Unknown";
}

namespace {

constexpr const char* kCsvHelp = R"(CSV columns written to --output:
  capacity        method,value,stderr
  sample          u,cap,mc_estimate,exact,stderr,trials,seed
  eta             u,estimate,stderr,radius,trials,seed
  ustar           u,verdict,growth_mean,growth_stderr,eta,eta_inner,eta_outer,trials,seed
  tree-exact      d,u,f_offroot,cap_root,ustar,branching_mean,eta
  tree-equiv      size,interlacement,bernoulli,stderr   (size 30 pools all larger clusters)
  fkg-check       cap1,cap2,cap_union,slack,pass
  counterexample  name,count,trials,estimate,stderr,wilson_lo,wilson_hi
Seed: --seed, else INTERLACE_SEED, else drawn at random and echoed in the output.)";

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

template <class T>
T parse_number(const std::string& s, const std::string& what) {
  T v{};
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw CliError(CliErrc::InvalidValue, "bad number '" + s + "' for " + what);
  }
  return v;
}

GraphSource parse_tree(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 2 && parts.size() != 3) throw CliError(CliErrc::InvalidValue, "--tree expects d,R[,w]");
  GraphSource g;
  g.kind = GraphSource::Kind::Tree;
  g.degree = parse_number<int>(parts[0], "--tree d");
  g.radius = parse_number<int>(parts[1], "--tree R");
  if (parts.size() == 3) g.weight = parse_number<double>(parts[2], "--tree w");
  return g;
}

GraphSource parse_lattice(const std::string& spec) {
  const auto parts = split(spec, ',');
  if (parts.size() != 2) throw CliError(CliErrc::InvalidValue, "--lattice expects dim,R");
  GraphSource g;
  g.kind = GraphSource::Kind::Lattice;
  g.dim = parse_number<int>(parts[0], "--lattice dim");
  g.radius = parse_number<int>(parts[1], "--lattice R");
  return g;
}

std::uint64_t auto_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct RawArgs {
  std::string graph, tree, lattice, seed;
  std::string u, set, set2, bracket;
};

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  RunConfig cfg;
  RawArgs raw;
  CLI::App app{"Random interlacements on weighted graphs"};
  app.footer(kCsvHelp);
  app.fallthrough();
  app.add_option("--graph", raw.graph, "Graph file (vertices/edge/boundary lines)");
  app.add_option("--tree", raw.tree, "Regular tree window d,R[,w]");
  app.add_option("--lattice", raw.lattice, "Lattice ball dim,R");
  app.add_option("--seed", raw.seed, "Base seed (falls back to INTERLACE_SEED)");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "CSV output path");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials");

  auto* capacity = app.add_subcommand("capacity", "Capacity of a vertex set");
  capacity->add_option("--set", raw.set, "Vertices i,j,k,...");
  capacity->add_option("--method", cfg.method, "exact|variational|mc")
      ->check(CLI::IsMember({"exact", "variational", "mc"}));
  capacity->add_flag("--richardson", cfg.richardson, "Lattice only: also solve at radius 2R");

  auto* sample = app.add_subcommand("sample", "Vacancy probability of a set, sampled against exp(-u cap)");
  sample->add_option("--u", raw.u, "Level u");
  sample->add_option("--observe", raw.set, "Vertices i,j,...");

  auto* eta = app.add_subcommand("eta", "Probability that the vacant cluster reaches the boundary");
  eta->add_option("--u", raw.u, "Levels u1,u2,...");
  eta->add_option("--origin", cfg.origin, "Origin vertex");

  auto* ustar = app.add_subcommand("ustar", "Bracket the critical level by bisection");
  ustar->add_option("--bracket", raw.bracket, "lo,hi");
  ustar->add_option("--origin", cfg.origin, "Origin vertex");
  ustar->add_option("--max-iterations", cfg.max_iterations, "Bisection steps");
  ustar->add_option("--min-width", cfg.min_width, "Stop below this bracket width");
  ustar->add_option("--confidence", cfg.confidence, "Two-sided confidence of each verdict");

  auto* tree_exact = app.add_subcommand("tree-exact", "Closed-form quantities on the d-regular tree");
  tree_exact->add_option("--d", cfg.d, "Degree d >= 3");
  tree_exact->add_option("--u", raw.u, "Level u (default 0)");

  auto* tree_equiv = app.add_subcommand("tree-equiv", "Interlacement vs Bernoulli cluster law on a tree");
  tree_equiv->add_option("--u", raw.u, "Level u");
  tree_equiv->add_option("--origin", cfg.origin, "Root vertex");
  tree_equiv->add_option("--f-scale", cfg.f_scale, "Multiply f before sampling (negative control)");

  auto* fkg = app.add_subcommand("fkg-check", "Capacity subadditivity, optionally with a sampled covariance");
  fkg->add_option("--set", raw.set, "First set");
  fkg->add_option("--set2", raw.set2, "Second set");
  fkg->add_option("--u", raw.u, "Level u");

  auto* counter = app.add_subcommand("counterexample", "Pattern checks on the exponential-weight half line");
  counter->add_option("--which", cfg.which, "impossible|lattice|markov|monotone-cond")
      ->check(CLI::IsMember({"impossible", "lattice", "markov", "monotone-cond"}));
  counter->add_option("--u", raw.u, "Level u (default 1)");
  counter->add_option("--n-max", cfg.n_max, "Truncation vertex");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw CliError(CliErrc::HelpRequested, app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw CliError(CliErrc::HelpRequested, app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ExtrasError& e) {
    throw CliError(CliErrc::UnknownFlag, e.what());
  } catch (const CLI::RequiredError& e) {
    throw CliError(CliErrc::MissingParameter, e.what());
  } catch (const CLI::ParseError& e) {
    throw CliError(CliErrc::InvalidValue, e.what());
  }

  const int sources = !raw.graph.empty() + !raw.tree.empty() + !raw.lattice.empty();
  if (sources > 1) throw CliError(CliErrc::ConflictingSources, "give only one of --graph, --tree, --lattice");
  if (!raw.graph.empty()) {
    cfg.graph.kind = GraphSource::Kind::File;
    cfg.graph.path = raw.graph;
  } else if (!raw.tree.empty()) {
    cfg.graph = parse_tree(raw.tree);
  } else if (!raw.lattice.empty()) {
    cfg.graph = parse_lattice(raw.lattice);
  }

  const auto chosen = app.get_subcommands();
  if (chosen.empty()) throw CliError(CliErrc::MissingParameter, "a subcommand is required");
  cfg.operation = chosen.front()->get_name();

  if (!raw.seed.empty()) {
    cfg.seed = parse_number<std::uint64_t>(raw.seed, "--seed");
    cfg.seed_source = "flag";
  } else if (const char* env = std::getenv("INTERLACE_SEED"); env != nullptr && *env != '\0') {
    cfg.seed = parse_number<std::uint64_t>(env, "INTERLACE_SEED");
    cfg.seed_source = "env";
  } else {
    cfg.seed = auto_seed();
    cfg.seed_source = "auto";
  }

  for (const auto& s : split(raw.u, ',')) cfg.u.push_back(parse_number<double>(s, "--u"));
  for (const auto& s : split(raw.set, ',')) cfg.set.push_back(parse_number<std::uint32_t>(s, "--set"));
  for (const auto& s : split(raw.set2, ',')) cfg.set2.push_back(parse_number<std::uint32_t>(s, "--set2"));
  for (const auto& s : split(raw.bracket, ',')) cfg.bracket.push_back(parse_number<double>(s, "--bracket"));
  for (double u : cfg.u) {
    if (!(u >= 0.0) || !std::isfinite(u)) throw CliError(CliErrc::InvalidValue, "--u must be finite and >= 0");
  }

  auto require = [&](bool ok, const char* what) {
    if (!ok) throw CliError(CliErrc::MissingParameter, cfg.operation + " needs " + what);
  };
  const bool has_graph = cfg.graph.kind != GraphSource::Kind::None;
  const std::string& op = cfg.operation;
  if (op == "capacity") {
    require(has_graph, "a graph source");
    require(!cfg.set.empty(), "--set");
    if (cfg.richardson && cfg.graph.kind != GraphSource::Kind::Lattice) {
      throw CliError(CliErrc::InvalidValue, "--richardson applies to --lattice windows");
    }
    if (cfg.trials == 0) cfg.trials = 10'000;
  } else if (op == "sample") {
    require(has_graph, "a graph source");
    require(cfg.u.size() == 1, "a single --u");
    require(!cfg.set.empty(), "--observe");
    if (cfg.trials == 0) cfg.trials = 100'000;
  } else if (op == "eta") {
    require(has_graph, "a graph source");
    require(!cfg.u.empty(), "--u");
    if (cfg.trials == 0) cfg.trials = 10'000;
  } else if (op == "ustar") {
    require(has_graph, "a graph source");
    require(cfg.bracket.size() == 2, "--bracket lo,hi");
    if (cfg.trials == 0) cfg.trials = 10'000;
  } else if (op == "tree-exact") {
    if (cfg.u.empty()) cfg.u.push_back(0.0);
    require(cfg.u.size() == 1, "a single --u");
  } else if (op == "tree-equiv") {
    require(has_graph, "a tree source");
    require(cfg.u.size() == 1, "a single --u");
    if (cfg.trials == 0) cfg.trials = 50'000;
  } else if (op == "fkg-check") {
    require(has_graph, "a graph source");
    require(!cfg.set.empty() && !cfg.set2.empty(), "--set and --set2");
    require(cfg.u.size() == 1, "a single --u");
  } else if (op == "counterexample") {
    require(!cfg.which.empty(), "--which");
    if (cfg.u.empty()) cfg.u.push_back(1.0);
    require(cfg.u.size() == 1, "a single --u");
    if (cfg.trials == 0) cfg.trials = 100'000;
  }
  return cfg;
}

namespace {

Window make_window(const GraphSource& g) {
  switch (g.kind) {
    case GraphSource::Kind::File: return load_graph_file(g.path);
    case GraphSource::Kind::Tree: return build_regular_tree(g.degree, g.radius, g.weight.value_or(1.0 / g.degree));
    case GraphSource::Kind::Lattice: return build_lattice_ball(g.dim, g.radius);
    case GraphSource::Kind::None: break;
  }
  throw CliError(CliErrc::MissingParameter, "no graph source");
}

Json graph_json(const Window& w) {
  Json j;
  j["label"] = w.label();
  j["vertices"] = w.size();
  j["boundary"] = w.boundary().size();
  const bool kill = w.boundary_kind() == BoundaryKind::Kill;
  j["boundary_model"] = kill ? "kill" : "geometric_return";
  if (kill) j["bias"] = "upper bound";
  return j;
}

VertexSet make_set(const Window& w, const std::vector<std::uint32_t>& v) {
  for (auto x : v) {
    if (x >= w.size()) throw CliError(CliErrc::InvalidValue, "vertex " + std::to_string(x) + " out of range");
  }
  return VertexSet(w.size(), v);
}

class CsvSink {
 public:
  explicit CsvSink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw CliError(CliErrc::InvalidValue, "cannot open --output " + path);
  }
  void row(const std::vector<std::string>& cells) {
    if (!file_.is_open()) return;
    for (std::size_t i = 0; i < cells.size(); ++i) file_ << (i ? "," : "") << cells[i];
    file_ << '\n';
  }

 private:
  std::ofstream file_;
};

std::string n12(double v) { return csv_number(v); }
std::string n12(std::uint64_t v) { return std::to_string(v); }

Json stats_header(const RunConfig& c) {
  Json j;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["seed_source"] = c.seed_source;
  return j;
}

int run_capacity(const RunConfig& c, Json& out, CsvSink& csv) {
  const Window w = make_window(c.graph);
  const VertexSet k = make_set(w, c.set);
  out["graph"] = graph_json(w);
  out["method"] = c.method;
  double value = 0.0;
  double se = 0.0;
  if (c.method == "exact") {
    value = capacity(w, k);
  } else if (c.method == "variational") {
    value = capacity_variational(w, k);
  } else {
    double var = 0.0;
    const auto members = k.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      const VertexId x = members[i];
      const McEstimate e = escape_probability_mc(w, k, x, c.trials, Rng::derive(c.seed, i), c.threads);
      value += w.graph().mu(x) * e.estimate;
      var += std::pow(w.graph().mu(x) * e.stderr_, 2);
    }
    se = std::sqrt(var);
    out.update(stats_header(c));
    out["stderr"] = round12(se);
  }
  out["value"] = round12(value);
  csv.row({"method", "value", "stderr"});
  csv.row({c.method, n12(value), n12(se)});
  if (c.richardson) {
    const Window w2 = build_lattice_ball(c.graph.dim, 2 * c.graph.radius);
    const double v2 = c.method == "variational" ? capacity_variational(w2, make_set(w2, c.set))
                                                : capacity(w2, make_set(w2, c.set));
    out["value_2r"] = round12(v2);
    out["richardson_difference"] = round12(value - v2);
  }
  return 0;
}

int run_sample(const RunConfig& c, Json& out, CsvSink& csv) {
  const Window w = make_window(c.graph);
  const VertexSet k = make_set(w, c.set);
  const double u = c.u.front();
  const double cap = capacity(w, k);
  const McEstimate mc = vacancy_probability_mc(w, k, u, c.trials, c.seed, c.threads);
  const double exact = vacancy_probability_exact(w, k, u);
  out["graph"] = graph_json(w);
  out["u"] = round12(u);
  out["cap"] = round12(cap);
  out["mc_estimate"] = round12(mc.estimate);
  out["exact"] = round12(exact);
  out["stderr"] = round12(mc.stderr_);
  out.update(stats_header(c));
  csv.row({"u", "cap", "mc_estimate", "exact", "stderr", "trials", "seed"});
  csv.row({n12(u), n12(cap), n12(mc.estimate), n12(exact), n12(mc.stderr_), n12(c.trials), n12(c.seed)});
  return 0;
}

int run_eta(const RunConfig& c, Json& out, CsvSink& csv) {
  const Window w = make_window(c.graph);
  out["graph"] = graph_json(w);
  out["origin"] = c.origin;
  Json rows = Json::array();
  csv.row({"u", "estimate", "stderr", "radius", "trials", "seed"});
  for (std::size_t i = 0; i < c.u.size(); ++i) {
    const EtaEstimate e = eta_mc(w, c.origin, c.u[i], c.trials, c.seed, c.threads);
    rows.push_back({{"u", round12(e.u)},
                    {"estimate", round12(e.probability)},
                    {"stderr", round12(e.stderr_)},
                    {"radius", e.radius},
                    {"trials", e.trials},
                    {"seed", c.seed}});
    csv.row({n12(e.u), n12(e.probability), n12(e.stderr_), std::to_string(e.radius), n12(e.trials), n12(c.seed)});
  }
  out["rows"] = rows;
  out.update(stats_header(c));
  return 0;
}

Json probe_json(const UstarProbe& p) {
  return {{"u", round12(p.u)},
          {"verdict", to_string(p.verdict)},
          {"growth_mean", round12(p.growth_mean)},
          {"growth_stderr", round12(p.growth_stderr)},
          {"eta", round12(p.eta.probability)},
          {"eta_stderr", round12(p.eta.stderr_)},
          {"eta_inner", round12(p.eta_inner)},
          {"eta_outer", round12(p.eta_outer)}};
}

int run_ustar(const RunConfig& c, Json& out, CsvSink& csv) {
  const Window w = make_window(c.graph);
  UstarOptions opts;
  opts.max_iterations = c.max_iterations;
  opts.min_width = c.min_width;
  opts.confidence = c.confidence;
  opts.threads = c.threads;
  out["graph"] = graph_json(w);
  csv.row({"u", "verdict", "growth_mean", "growth_stderr", "eta", "eta_inner", "eta_outer", "trials", "seed"});
  auto dump = [&](const std::vector<UstarProbe>& probes) {
    Json arr = Json::array();
    for (const auto& p : probes) {
      arr.push_back(probe_json(p));
      csv.row({n12(p.u), to_string(p.verdict), n12(p.growth_mean), n12(p.growth_stderr), n12(p.eta.probability),
               n12(p.eta_inner), n12(p.eta_outer), n12(c.trials), n12(c.seed)});
    }
    return arr;
  };
  try {
    const UstarBracket b = estimate_ustar(w, c.origin, c.bracket[0], c.bracket[1], c.trials, c.seed, opts);
    out["lo"] = round12(b.lo);
    out["hi"] = round12(b.hi);
    out["confidence"] = round12(b.confidence);
    out["radii_checked"] = {b.radii_checked[0], b.radii_checked[1]};
    out["iterations"] = b.iterations;
    out["stop_reason"] = b.stop_reason;
    out["probes"] = dump(b.probes);
    out.update(stats_header(c));
    return 0;
  } catch (const BracketError& e) {
    out["error"] = "BracketError";
    out["message"] = e.what();
    out["probes"] = dump(e.probes());
    out.update(stats_header(c));
    return 2;
  }
}

int run_tree_exact(const RunConfig& c, Json& out, CsvSink& csv) {
  const double u = c.u.front();
  const Window w = build_regular_tree(c.d, 3, 1.0 / c.d);
  const TreeRooted t(w, 0);
  const CouplingTable f = coupling_f(t);
  const double cap_root = capacity(w, VertexSet(w.size(), {0}));
  const double ustar = regular_tree_ustar(c.d);
  const double mean = branching_mean(c.d, u);
  const double eta = regular_tree_eta(c.d, u);
  out["d"] = c.d;
  out["u"] = round12(u);
  out["f_offroot"] = round12(f.f[1]);
  out["cap_root"] = round12(cap_root);
  out["ustar"] = round12(ustar);
  out["branching_mean"] = round12(mean);
  out["eta"] = round12(eta);
  csv.row({"d", "u", "f_offroot", "cap_root", "ustar", "branching_mean", "eta"});
  csv.row({std::to_string(c.d), n12(u), n12(f.f[1]), n12(cap_root), n12(ustar), n12(mean), n12(eta)});
  return 0;
}

int run_tree_equiv(const RunConfig& c, Json& out, CsvSink& csv) {
  const Window w = make_window(c.graph);
  const TreeRooted t(w, c.origin);
  const EquivalenceReport r = cluster_law_equivalence_test(t, c.u.front(), c.trials, c.seed, c.f_scale, c.threads);
  out["graph"] = graph_json(w);
  out["u"] = round12(c.u.front());
  out["f_scale"] = round12(c.f_scale);
  out["tv"] = round12(r.tv);
  out["threshold"] = round12(r.threshold);
  out["pass"] = r.pass;
  Json hi = Json::array(), hb = Json::array(), se = Json::array();
  csv.row({"size", "interlacement", "bernoulli", "stderr"});
  const auto n = static_cast<double>(r.trials);
  for (std::size_t i = 0; i < r.interlacement_histogram.size(); ++i) {
    const double a = r.interlacement_histogram[i];
    const double b = r.bernoulli_histogram[i];
    // standard error of the bin difference a - b
    const double bin_se = std::sqrt((a * (1 - a) + b * (1 - b)) / n);
    hi.push_back(round12(a));
    hb.push_back(round12(b));
    se.push_back(round12(bin_se));
    csv.row({std::to_string(i), n12(a), n12(b), n12(bin_se)});
  }
  out["interlacement_histogram"] = hi;
  out["bernoulli_histogram"] = hb;
  out["stderr"] = se;
  out.update(stats_header(c));
  return 0;
}

int run_fkg(const RunConfig& c, Json& out, CsvSink& csv) {
  const Window w = make_window(c.graph);
  const VertexSet k1 = make_set(w, c.set);
  const VertexSet k2 = make_set(w, c.set2);
  const double u = c.u.front();
  const FkgCapacityReport r = fkg_capacity_check(w, k1, k2, u);
  out["graph"] = graph_json(w);
  out["u"] = round12(u);
  out["cap1"] = round12(r.cap1);
  out["cap2"] = round12(r.cap2);
  out["cap_union"] = round12(r.cap_union);
  out["slack"] = round12(r.slack);
  out["pass"] = r.pass;
  csv.row({"cap1", "cap2", "cap_union", "slack", "pass"});
  csv.row({n12(r.cap1), n12(r.cap2), n12(r.cap_union), n12(r.slack), r.pass ? "true" : "false"});
  if (c.trials > 0) {
    const auto members = [](const VertexSet& s) {
      const auto m = s.members();
      return std::vector<VertexId>(m.begin(), m.end());
    };
    const FkgMcReport mc = fkg_mc_check(w, u, EventSpec::all_vacant(members(k1)), EventSpec::all_vacant(members(k2)),
                                        c.trials, c.seed, c.threads);
    out["mc"] = {{"p1", round12(mc.p1)},
                 {"p2", round12(mc.p2)},
                 {"p12", round12(mc.p12)},
                 {"covariance", round12(mc.covariance)},
                 {"stderr", round12(mc.stderr_)},
                 {"pass", mc.pass}};
    out.update(stats_header(c));
  }
  return r.pass ? 0 : 1;
}

int run_counterexample(const RunConfig& c, Json& out, CsvSink& csv) {
  const double u = c.u.front();
  CounterexampleReport r;
  if (c.which == "impossible") {
    r = remark33_impossible_configuration(u, c.trials, c.seed, c.n_max, c.threads);
  } else if (c.which == "lattice") {
    r = lattice_condition_violation(u, c.trials, c.seed, c.n_max, c.threads);
  } else {
    r = markov_field_violation(u, c.trials, c.seed, c.which == "monotone-cond", c.n_max, c.threads);
  }
  out["which"] = r.which;
  out["u"] = round12(u);
  out["n_max"] = r.n_max;
  Json est = Json::object(), bounds = Json::object();
  csv.row({"name", "count", "trials", "estimate", "stderr", "wilson_lo", "wilson_hi"});
  for (const auto& e : r.estimates) {
    est[e.name] = {{"count", e.count},
                   {"trials", e.trials},
                   {"estimate", round12(e.estimate)},
                   {"stderr", round12(e.stderr_)}};
    bounds[e.name] = {round12(e.wilson.lo), round12(e.wilson.hi)};
    csv.row({e.name, n12(e.count), n12(e.trials), n12(e.estimate), n12(e.stderr_), n12(e.wilson.lo),
             n12(e.wilson.hi)});
  }
  out["estimates"] = est;
  out["bounds"] = bounds;
  out["confidence"] = round12(r.confidence);
  out["structural_zero"] = r.structural_zero;
  out["trajectory_violations"] = r.trajectory_violations;
  if (r.which == "lattice") out["symmetry_z"] = round12(r.symmetry_z);
  out["verdict"] = r.verdict;
  out.update(stats_header(c));
  return r.verdict == "inconclusive" ? 2 : 0;
}

Json error_json(const std::string& code, const std::string& message) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  return j;
}

const char* graph_code(GraphErrc c) noexcept { return to_string(c); }

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  Json j;
  j["operation"] = config.operation;
  int status = 1;
  try {
    CsvSink csv(config.output);
    const std::string& op = config.operation;
    if (op == "capacity") status = run_capacity(config, j, csv);
    else if (op == "sample") status = run_sample(config, j, csv);
    else if (op == "eta") status = run_eta(config, j, csv);
    else if (op == "ustar") status = run_ustar(config, j, csv);
    else if (op == "tree-exact") status = run_tree_exact(config, j, csv);
    else if (op == "tree-equiv") status = run_tree_equiv(config, j, csv);
    else if (op == "fkg-check") status = run_fkg(config, j, csv);
    else if (op == "counterexample") status = run_counterexample(config, j, csv);
    else throw CliError(CliErrc::InvalidValue, "unknown operation " + op);
  } catch (const CliError& e) {
    j = error_json(to_string(e.code()), e.what());
    status = 1;
  } catch (const GraphError& e) {
    j = error_json(graph_code(e.code()), e.what());
    status = 1;
  } catch (const PotentialError& e) {
    j = error_json("PotentialError", e.what());
    status = 1;
  } catch (const std::exception& e) {
    j = error_json("Error", e.what());
    status = 1;
  }
  out << j.dump(2) << '\n';
  return status;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(argc, argv);
  } catch (const CliError& e) {
    if (e.code() == CliErrc::HelpRequested) {
      out << e.what();
      return 0;
    }
    err << "try --help for usage\n";
    out << error_json(to_string(e.code()), e.what()).dump(2) << '\n';
    return 1;
  }
  return run(cfg, out);
}

}  // namespace interlace::cli
