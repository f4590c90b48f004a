#include "cli.hpp"

#include <CLI11.hpp>

#include <ostream>

#include "impactfield/errors.hpp"
#include "impactfield/harness.hpp"

namespace impactfield {

namespace {

struct AnalyzeArgs {
  std::string input;
  bool directed = false;
  bool undirected = false;
  bool symmetrize = false;
  std::vector<double> gammas;
  bool gamma_grid = false;
  std::vector<std::size_t> orders{1, 2};
  bool dyads = false;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t dense_threshold = 0;
  std::uint32_t fit_min = 1;
  std::uint32_t fit_max = 6;
  bool log_correlation = false;
  std::string network;
};

struct GenerateArgs {
  std::string kind;
  std::size_t n = 0;
  double p = -1.0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  bool directed = false;
  std::string out;
};

struct ReplicateArgs {
  std::string corpus;
  std::string out;
  std::size_t workers = 1;
  std::vector<double> gammas;
  std::vector<std::size_t> orders{1, 2};
  std::uint64_t seed = 0;
  std::size_t dense_threshold = 0;
  std::uint32_t fit_min = 1;
  std::uint32_t fit_max = 6;
  bool log_correlation = false;
};

void add_sweep_options(CLI::App* cmd, std::vector<double>& gammas, std::vector<std::size_t>& orders,
                       std::uint64_t& seed, std::size_t& dense_threshold, std::uint32_t& fit_min,
                       std::uint32_t& fit_max, bool& log_correlation) {
  cmd->add_option("--gamma", gammas, "Decay parameter, repeatable (default: the full grid)");
  cmd->add_option("--orders", orders, "Approximation orders")->delimiter(',');
  cmd->add_option("--seed", seed, "Seed for iterative eigensolver start vectors");
  cmd->add_option("--dense-threshold", dense_threshold,
                  "Largest n handled by the dense eigensolver (overrides IMPACTFIELD_DENSE_THRESHOLD)");
  cmd->add_option("--fit-min", fit_min, "Smallest distance in the exponential fit");
  cmd->add_option("--fit-max", fit_max, "Largest distance in the exponential fit");
  cmd->add_flag("--log-correlation", log_correlation, "Correlate log impacts instead of raw values");
}

int analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  if (a.directed == a.undirected) {
    err << "impactfield analyze: exactly one of --directed or --undirected is required\n";
    return static_cast<int>(ErrorClass::kValidation);
  }
  RunConfig config;
  config.input = a.input;
  config.directed = a.directed;
  if (a.directed) {
    config.treatments.push_back(Treatment::kDirected);
    if (a.symmetrize) config.treatments.push_back(Treatment::kSymmetrized);
  } else {
    config.treatments.push_back(Treatment::kSymmetrized);
  }
  if (!a.gammas.empty()) config.gammas = a.gammas;
  config.orders = a.orders;
  config.include_exact = a.dyads;
  config.out_dir = a.out;
  config.seed = a.seed;
  if (a.dense_threshold > 0) config.dense_threshold = a.dense_threshold;
  config.fit_d_min = a.fit_min;
  config.fit_d_max = a.fit_max;
  config.scale = a.log_correlation ? CorrelationScale::kLogLog : CorrelationScale::kRaw;
  config.network_id = a.network;
  return cmd_analyze(config, out, err);
}

int generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  GeneratorSpec spec;
  try {
    spec.kind = parse_generator_kind(a.kind);
  } catch (const ValidationError& e) {
    err << "impactfield generate: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::kValidation);
  }
  spec.n = a.n;
  spec.seed = a.seed;
  if (spec.kind == GeneratorKind::kErdosRenyi) {
    if (a.p < 0.0 || a.m != 0) {
      err << "impactfield generate: er takes --p and not --m\n";
      return static_cast<int>(ErrorClass::kValidation);
    }
    spec.p = a.p;
    spec.directed = a.directed;
  } else {
    if (a.m == 0 || a.p >= 0.0 || a.directed) {
      err << "impactfield generate: pa takes a positive --m and neither --p nor --directed\n";
      return static_cast<int>(ErrorClass::kValidation);
    }
    spec.m = a.m;
  }
  return cmd_generate(spec, a.out, out, err);
}

int replicate(const ReplicateArgs& a, std::ostream& out, std::ostream& err) {
  ReplicateConfig config;
  config.corpus = a.corpus;
  config.out_dir = a.out;
  config.workers = a.workers;
  if (!a.gammas.empty()) config.gammas = a.gammas;
  config.orders = a.orders;
  config.seed = a.seed;
  if (a.dense_threshold > 0) config.dense_threshold = a.dense_threshold;
  config.fit_d_min = a.fit_min;
  config.fit_d_max = a.fit_max;
  config.scale = a.log_correlation ? CorrelationScale::kLogLog : CorrelationScale::kRaw;
  return cmd_replicate(config, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Total-impact analysis of linear diffusion on networks", "impactfield"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze_cmd = app.add_subcommand("analyze", "Exact and spectral impact for one edge list");
  analyze_cmd->add_option("--input", aa.input, "Edge-list file")->required();
  auto* dir_flag = analyze_cmd->add_flag("--directed", aa.directed, "Read arcs as directed");
  auto* undir_flag = analyze_cmd->add_flag("--undirected", aa.undirected, "Read edges as undirected");
  dir_flag->excludes(undir_flag);
  analyze_cmd->add_flag("--symmetrize", aa.symmetrize, "Also analyze the symmetrized graph");
  add_sweep_options(analyze_cmd, aa.gammas, aa.orders, aa.seed, aa.dense_threshold, aa.fit_min, aa.fit_max,
                    aa.log_correlation);
  auto* grid_flag = analyze_cmd->add_flag("--gamma-grid", aa.gamma_grid, "Use the full gamma grid (default)");
  grid_flag->excludes("--gamma");
  analyze_cmd->add_flag("--dyads", aa.dyads, "Write per-dyad exact and approximate impact");
  analyze_cmd->add_option("--network", aa.network, "Network id in output rows (default: input file stem)");
  analyze_cmd->add_option("--out", aa.out, "Output directory")->required();

  GenerateArgs ga;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic edge list");
  generate_cmd->add_option("kind", ga.kind, "er or pa")->required()->check(CLI::IsMember({"er", "pa"}));
  generate_cmd->add_option("--n", ga.n, "Number of nodes")->required();
  generate_cmd->add_option("--p", ga.p, "Edge probability (er)");
  generate_cmd->add_option("--m", ga.m, "Edges per arriving node (pa)");
  generate_cmd->add_option("--seed", ga.seed, "Random seed");
  generate_cmd->add_flag("--directed", ga.directed, "Directed arcs (er)");
  generate_cmd->add_option("--out", ga.out, "Output file")->required();

  ReplicateArgs ra;
  auto* replicate_cmd = app.add_subcommand("replicate", "Run the full study over a directory of edge lists");
  replicate_cmd->add_option("--corpus", ra.corpus, "Directory of edge-list files")->required();
  replicate_cmd->add_option("--out", ra.out, "Output directory")->required();
  replicate_cmd->add_option("--workers", ra.workers, "Networks processed in parallel");
  add_sweep_options(replicate_cmd, ra.gammas, ra.orders, ra.seed, ra.dense_threshold, ra.fit_min, ra.fit_max,
                    ra.log_correlation);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorClass::kValidation);
  }

  if (analyze_cmd->parsed()) return analyze(aa, out, err);
  if (generate_cmd->parsed()) return generate(ga, out, err);
  return replicate(ra, out, err);
}

}  // namespace impactfield
