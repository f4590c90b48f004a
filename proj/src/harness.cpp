#include "impactfield/harness.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "impactfield/csv.hpp"
#include "impactfield/errors.hpp"

namespace impactfield {

namespace fs = std::filesystem;
using csv::escape;
using csv::format_double;
using csv::format_short;

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "er") return GeneratorKind::kErdosRenyi;
  if (name == "pa") return GeneratorKind::kPreferential;
  throw ValidationError("unknown generator '" + std::string(name) + "' (expected er or pa)");
}

Graph GeneratorSpec::build() const {
  if (kind == GeneratorKind::kErdosRenyi) return generate_er(n, p, directed, seed);
  return generate_preferential(n, m, seed);
}

std::string GeneratorSpec::describe() const {
  std::string s = kind == GeneratorKind::kErdosRenyi ? "er" : "pa";
  s += " n=" + std::to_string(n);
  if (kind == GeneratorKind::kErdosRenyi) {
    s += " p=" + format_double(p);
    if (directed) s += " directed";
  } else {
    s += " m=" + std::to_string(m);
  }
  s += " seed=" + std::to_string(seed);
  return s;
}

namespace {

void validate_sweep(const std::vector<double>& gammas, const std::vector<std::size_t>& orders,
                    std::uint32_t fit_d_min, std::uint32_t fit_d_max,
                    const std::optional<std::size_t>& dense_threshold) {
  if (gammas.empty()) throw ValidationError("at least one gamma is required");
  for (double g : gammas) {
    if (!(g > 0.0 && g < 1.0)) throw ValidationError("gamma must lie in (0,1), got " + format_double(g));
  }
  if (std::set<double>(gammas.begin(), gammas.end()).size() != gammas.size()) {
    throw ValidationError("gamma values must be distinct");
  }
  if (orders.empty()) throw ValidationError("at least one approximation order is required");
  for (auto k : orders) {
    if (k == 0) throw ValidationError("approximation orders must be positive");
  }
  if (std::set<std::size_t>(orders.begin(), orders.end()).size() != orders.size()) {
    throw ValidationError("approximation orders must be distinct");
  }
  if (fit_d_min < 1 || fit_d_min > fit_d_max) {
    throw ValidationError("fit range must satisfy 1 <= d_min <= d_max");
  }
  if (dense_threshold && *dense_threshold == 0) throw ValidationError("dense threshold must be positive");
}

void probe_output_directory(const fs::path& dir) {
  if (dir.empty()) throw ValidationError("an output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ValidationError("cannot create output directory '" + dir.string() + "'");
  }
  const fs::path probe = dir / (".probe-" + std::to_string(::getpid()));
  {
    std::ofstream f(probe);
    if (!f) throw ValidationError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

SpectralOptions spectral_for(std::uint64_t seed, const std::optional<std::size_t>& dense_threshold) {
  auto opts = SpectralOptions::from_environment();
  if (dense_threshold) opts.dense_threshold = *dense_threshold;
  opts.seed = seed;
  return opts;
}

std::string read_file(const fs::path& path) {
  if (!fs::exists(path)) throw ValidationError("input file not found: " + path.string());
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read input file: " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

std::string cell_name(const StudyCell& c) {
  return c.network + " " + std::string(to_string(c.treatment)) + " gamma=" + format_double(c.gamma);
}

[[noreturn]] void throw_cell_error(const StudyCell& c) {
  const std::string what = "cell " + cell_name(c) + ": " + *c.error;
  switch (c.error_class.value_or(ErrorClass::kNumerical)) {
    case ErrorClass::kValidation:
      throw ValidationError(what);
    case ErrorClass::kParse:
      throw Error(ErrorClass::kParse, what);
    default:
      throw NumericalError(what);
  }
}

}  // namespace

void RunConfig::validate() const {
  if (input.has_value() == generator.has_value()) {
    throw ValidationError("exactly one of an input file or a generator must be given");
  }
  validate_sweep(gammas, orders, fit_d_min, fit_d_max, dense_threshold);
  const bool input_directed =
      generator ? generator->kind == GeneratorKind::kErdosRenyi && generator->directed : directed;
  for (auto t : treatments) {
    if (t == Treatment::kDirected && !input_directed) {
      throw ValidationError("the directed treatment needs a directed input");
    }
  }
  spectral_for(seed, dense_threshold);
  probe_output_directory(out_dir);
}

SpectralOptions RunConfig::spectral_options() const { return spectral_for(seed, dense_threshold); }

void ReplicateConfig::validate() const {
  validate_sweep(gammas, orders, fit_d_min, fit_d_max, dense_threshold);
  if (workers == 0) throw ValidationError("workers must be positive");
  if (!fs::is_directory(corpus)) throw ValidationError("corpus is not a directory: " + corpus.string());
  spectral_for(seed, dense_threshold);
  probe_output_directory(out_dir);
}

// ---- OutputBatch

struct OutputBatch::Entry {
  fs::path target;
  fs::path temp;
  std::ofstream stream;
};

OutputBatch::OutputBatch() = default;

OutputBatch::~OutputBatch() {
  if (committed_) return;
  for (auto& e : entries_) {
    e->stream.close();
    std::error_code ec;
    fs::remove(e->temp, ec);
  }
}

std::ostream& OutputBatch::open(const fs::path& target) {
  static std::atomic<unsigned> counter{0};
  if (committed_) throw std::logic_error("output batch already committed");
  auto e = std::make_unique<Entry>();
  e->target = target;
  e->temp = target.parent_path() / ("." + target.filename().string() + ".tmp-" + std::to_string(::getpid()) +
                                    "-" + std::to_string(counter++));
  e->stream.open(e->temp, std::ios::binary | std::ios::trunc);
  if (!e->stream) throw ValidationError("cannot write " + e->temp.string());
  entries_.push_back(std::move(e));
  return entries_.back()->stream;
}

void OutputBatch::write(const fs::path& target, std::string_view contents) {
  open(target).write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

void OutputBatch::commit() {
  for (auto& e : entries_) {
    e->stream.close();
    if (!e->stream) throw ValidationError("failed writing " + e->target.string());
  }
  for (auto& e : entries_) fs::rename(e->temp, e->target);
  committed_ = true;
}

// ---- CSV rendering

std::string curves_csv(const std::vector<StudyCell>& cells) {
  std::string out(kCurvesHeader);
  out += '\n';
  for (const auto& c : cells) {
    if (!c.curve) continue;
    const std::string prefix =
        escape(c.network) + ',' + std::string(to_string(c.treatment)) + ',' + format_double(c.gamma) + ',';
    for (const auto& p : c.curve->points) {
      out += prefix + std::to_string(p.distance) + ',' + format_double(p.mean_impact) + ',' +
             std::to_string(p.n_pairs) + '\n';
    }
  }
  return out;
}

std::string fits_csv(const std::vector<StudyCell>& cells) {
  std::string out(kFitsHeader);
  out += '\n';
  for (const auto& c : cells) {
    if (!c.fit) continue;
    const auto& f = *c.fit;
    out += escape(c.network) + ',' + std::string(to_string(c.treatment)) + ',' + format_double(c.gamma) + ',' +
           std::to_string(f.d_min) + ',' + std::to_string(f.d_max) + ',' + format_double(f.slope) + ',' +
           format_double(f.intercept) + ',' + format_double(f.r_squared) + '\n';
  }
  return out;
}

std::string correlations_csv(const std::vector<StudyCell>& cells) {
  std::string out(kCorrelationsHeader);
  out += '\n';
  for (const auto& c : cells) {
    for (const auto& r : c.correlations) {
      out += escape(r.network) + ',' + std::string(to_string(r.treatment)) + ',' + format_double(r.gamma) +
             ',' + std::to_string(r.order) + ',' + format_double(r.pearson_r) + ',' +
             std::to_string(r.n_dyads) + '\n';
    }
  }
  return out;
}

std::string manifest_csv(const std::vector<ManifestRow>& rows) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += escape(r.network) + ',' + std::to_string(r.n) + ',' + std::to_string(r.edges) + ',' +
           format_double(r.mean_degree) + ',' + std::to_string(r.diameter) + ',' + r.status + ',' +
           escape(one_line(r.reason)) + '\n';
  }
  return out;
}

std::string dyad_file_name(Treatment t, double gamma) {
  return "dyads_" + std::string(to_string(t)) + "_" + format_double(gamma) + ".csv";
}

namespace {

void write_dyads(std::ostream& os, const CellView& v) {
  os << "src,dst,dist,exact";
  for (auto k : v.orders) os << ",approx" << k;
  os << '\n';
  const auto n = v.graph.n();
  std::string line;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string src = escape(v.graph.label(static_cast<NodeId>(i)));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      const Hops d = v.dist(i, j);
      line = src;
      line += ',';
      line += escape(v.graph.label(static_cast<NodeId>(j)));
      line += ',';
      line += d.finite() ? std::to_string(d.value()) : "inf";
      line += ',';
      line += format_double(v.exact.values(ii, jj));
      for (const auto& a : v.approx) {
        line += ',';
        line += format_double(a.values(ii, jj));
      }
      line += '\n';
      os << line;
    }
  }
}

// ---- CSV parsing

struct Table {
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // line number, fields
};

Table read_table(std::string_view text) {
  Table t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = csv::split(line, line_no);
    if (t.header.empty()) {
      t.header = std::move(fields);
    } else {
      if (fields.size() != t.header.size()) {
        throw ParseError(line_no, "expected " + std::to_string(t.header.size()) + " fields, found " +
                                      std::to_string(fields.size()));
      }
      t.rows.emplace_back(line_no, std::move(fields));
    }
  }
  if (t.header.empty()) throw ParseError(1, "missing header");
  return t;
}

Table read_table(std::string_view text, std::string_view header) {
  auto t = read_table(text);
  if (t.header != csv::split(header)) {
    throw ParseError(1, "unexpected header, expected '" + std::string(header) + "'");
  }
  return t;
}

Treatment treatment_field(const std::string& s, std::size_t line) {
  try {
    return parse_treatment(s);
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
}

std::size_t count_field(const std::string& s, std::size_t line) {
  const auto v = csv::parse_integer(s, line);
  if (v < 0) throw ParseError(line, "negative count '" + s + "'");
  return static_cast<std::size_t>(v);
}

std::uint32_t hops_field(const std::string& s, std::size_t line) {
  const auto v = count_field(s, line);
  if (v >= std::numeric_limits<std::uint32_t>::max()) throw ParseError(line, "distance out of range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<CurveRow> parse_curves_csv(std::string_view text) {
  std::vector<CurveRow> out;
  for (const auto& [line, f] : read_table(text, kCurvesHeader).rows) {
    out.push_back({f[0], treatment_field(f[1], line), csv::parse_double(f[2], line),
                   {hops_field(f[3], line), csv::parse_double(f[4], line), count_field(f[5], line)}});
  }
  return out;
}

std::vector<FitRow> parse_fits_csv(std::string_view text) {
  std::vector<FitRow> out;
  for (const auto& [line, f] : read_table(text, kFitsHeader).rows) {
    out.push_back({f[0], treatment_field(f[1], line), csv::parse_double(f[2], line), hops_field(f[3], line),
                   hops_field(f[4], line), csv::parse_double(f[5], line), csv::parse_double(f[6], line),
                   csv::parse_double(f[7], line)});
  }
  return out;
}

std::vector<CorrelationRecord> parse_correlations_csv(std::string_view text) {
  std::vector<CorrelationRecord> out;
  for (const auto& [line, f] : read_table(text, kCorrelationsHeader).rows) {
    out.push_back({f[0], csv::parse_double(f[2], line), treatment_field(f[1], line), count_field(f[3], line),
                   csv::parse_double(f[4], line), count_field(f[5], line)});
  }
  return out;
}

std::vector<ManifestRow> parse_manifest_csv(std::string_view text) {
  std::vector<ManifestRow> out;
  for (const auto& [line, f] : read_table(text, kManifestHeader).rows) {
    if (f[5] != "ok" && f[5] != "partial" && f[5] != "failed") {
      throw ParseError(line, "unknown status '" + f[5] + "'");
    }
    out.push_back({f[0], count_field(f[1], line), count_field(f[2], line), csv::parse_double(f[3], line),
                   hops_field(f[4], line), f[5], f[6]});
  }
  return out;
}

std::vector<DyadRow> parse_dyads_csv(std::string_view text) {
  const auto t = read_table(text);
  const auto& h = t.header;
  if (h.size() < 4 || h[0] != "src" || h[1] != "dst" || h[2] != "dist" || h[3] != "exact") {
    throw ParseError(1, "unexpected dyad header");
  }
  for (std::size_t c = 4; c < h.size(); ++c) {
    if (h[c].rfind("approx", 0) != 0) throw ParseError(1, "unexpected column '" + h[c] + "'");
  }
  std::vector<DyadRow> out;
  for (const auto& [line, f] : t.rows) {
    DyadRow r{f[0], f[1], std::nullopt, csv::parse_double(f[3], line), {}};
    if (f[2] != "inf") r.dist = hops_field(f[2], line);
    for (std::size_t c = 4; c < f.size(); ++c) r.approx.push_back(csv::parse_double(f[c], line));
    out.push_back(std::move(r));
  }
  return out;
}

// ---- inputs and statistics

ManifestRow describe_network(const std::string& id, const Graph& g) {
  ManifestRow row;
  row.network = id;
  row.n = g.n();
  row.edges = g.edge_count();
  if (g.n() > 0) {
    const double arcs = static_cast<double>(g.edge_count()) * (g.directed() ? 1.0 : 2.0);
    row.mean_degree = arcs / static_cast<double>(g.n());
    const auto core = largest_component(symmetrize_weak(g).graph);
    row.diameter = geodesic_distances(core).max_finite();
  }
  row.status = "ok";
  return row;
}

std::optional<bool> directedness_hint(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line.front() != '#') break;
    line.remove_prefix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
      line.remove_suffix(1);
    }
    if (line == "impactfield: directed") return true;
    if (line == "impactfield: undirected") return false;
  }
  return std::nullopt;
}

Graph load_edge_list(const fs::path& path, std::optional<bool> directed) {
  const auto text = read_file(path);
  return parse_edge_list(text, directed ? *directed : directedness_hint(text).value_or(true));
}

int exit_status(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return static_cast<int>(err->error_class());
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return static_cast<int>(ErrorClass::kValidation);
  return static_cast<int>(ErrorClass::kNumerical);
}

// ---- commands

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    const Graph g = config.input ? load_edge_list(*config.input, config.directed) : config.generator->build();

    StudyOptions opts;
    opts.network_id = !config.network_id.empty() ? config.network_id
                      : config.input            ? config.input->stem().string()
                                                : "generated";
    opts.treatments = config.treatments;
    opts.fit_d_min = config.fit_d_min;
    opts.fit_d_max = config.fit_d_max;
    opts.scale = config.scale;
    opts.spectral = config.spectral_options();

    OutputBatch batch;
    if (config.include_exact) {
      opts.on_cell = [&](const CellView& v) {
        write_dyads(batch.open(config.out_dir / dyad_file_name(v.treatment, v.gamma)), v);
      };
    }
    const auto cells = run_study(g, config.gammas, config.orders, opts);
    for (const auto& c : cells) {
      if (c.error) throw_cell_error(c);
    }
    batch.write(config.out_dir / "curves.csv", curves_csv(cells));
    batch.write(config.out_dir / "fits.csv", fits_csv(cells));
    batch.write(config.out_dir / "correlations.csv", correlations_csv(cells));
    batch.commit();

    for (const auto& c : cells) {
      out << to_string(c.treatment) << " gamma=" << format_short(c.gamma);
      if (c.fit) out << " slope=" << format_short(c.fit->slope) << " r2=" << format_short(c.fit->r_squared);
      for (const auto& r : c.correlations) out << " r[" << r.order << "]=" << format_short(r.pearson_r);
      out << '\n';
      for (const auto& note : c.notes) err << "note: " << cell_name(c) << ": " << note << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    err << "impactfield analyze: " << e.what() << '\n';
    return exit_status(e);
  }
}

int cmd_generate(const GeneratorSpec& spec, const fs::path& out_path, std::ostream& out, std::ostream& err) {
  try {
    if (out_path.empty()) throw ValidationError("an output file is required");
    const Graph g = spec.build();
    if (!out_path.parent_path().empty()) fs::create_directories(out_path.parent_path());
    std::string text = std::string("# impactfield: ") + (g.directed() ? "directed" : "undirected") + '\n';
    text += "# generator: " + spec.describe() + '\n';
    text += serialize_edge_list(g);
    OutputBatch batch;
    batch.write(out_path, text);
    batch.commit();
    out << "wrote " << g.edge_count() << " edges to " << out_path.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "impactfield generate: " << e.what() << '\n';
    return exit_status(e);
  }
}

int cmd_replicate(const ReplicateConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(config.corpus)) {
      if (!entry.is_regular_file()) continue;
      if (entry.path().filename().string().starts_with(".")) continue;
      files.push_back(entry.path());
    }
    if (files.empty()) throw ValidationError("no inputs in corpus " + config.corpus.string());
    std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
      return a.filename().string() < b.filename().string();
    });
    std::set<std::string> ids;
    for (const auto& f : files) {
      if (!ids.insert(f.stem().string()).second) {
        throw ValidationError("two corpus files share the network id '" + f.stem().string() + "'");
      }
    }

    struct Result {
      ManifestRow manifest;
      std::vector<StudyCell> cells;
      int status = 0;
    };
    std::vector<Result> results(files.size());
    const auto spectral = spectral_for(config.seed, config.dense_threshold);
    const auto count = static_cast<std::ptrdiff_t>(files.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(config.workers))
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      auto& r = results[static_cast<std::size_t>(k)];
      const std::string id = files[static_cast<std::size_t>(k)].stem().string();
      r.manifest.network = id;
      try {
        const Graph g = load_edge_list(files[static_cast<std::size_t>(k)]);
        r.manifest = describe_network(id, g);
        StudyOptions opts;
        opts.network_id = id;
        opts.fit_d_min = config.fit_d_min;
        opts.fit_d_max = config.fit_d_max;
        opts.scale = config.scale;
        opts.spectral = spectral;
        r.cells = run_study(g, config.gammas, config.orders, opts);
        std::vector<std::string> failures;
        for (const auto& c : r.cells) {
          if (c.error) {
            if (r.status == 0) r.status = static_cast<int>(c.error_class.value_or(ErrorClass::kNumerical));
            failures.push_back(std::string(to_string(c.treatment)) + " gamma=" + format_double(c.gamma) + ": " +
                               *c.error);
          }
        }
        if (!failures.empty()) {
          r.manifest.status = failures.size() == r.cells.size() ? "failed" : "partial";
          for (const auto& f : failures) r.manifest.reason += (r.manifest.reason.empty() ? "" : "; ") + f;
        }
      } catch (const std::exception& e) {
        r.manifest.status = "failed";
        r.manifest.reason = e.what();
        r.status = exit_status(e);
        r.cells.clear();
      } catch (...) {
        r.manifest.status = "failed";
        r.manifest.reason = "unknown error";
        r.status = static_cast<int>(ErrorClass::kNumerical);
        r.cells.clear();
      }
    }

    std::vector<StudyCell> cells;
    std::vector<ManifestRow> manifest;
    std::size_t failed = 0;
    for (auto& r : results) {
      if (r.manifest.status != "ok") {
        err << "warning: " << r.manifest.network << ": " << r.manifest.status << ": " << r.manifest.reason << '\n';
      }
      failed += r.manifest.status == "failed";
      manifest.push_back(r.manifest);
      for (auto& c : r.cells) cells.push_back(std::move(c));
    }

    OutputBatch batch;
    batch.write(config.out_dir / "curves.csv", curves_csv(cells));
    batch.write(config.out_dir / "fits.csv", fits_csv(cells));
    batch.write(config.out_dir / "correlations.csv", correlations_csv(cells));
    batch.write(config.out_dir / "manifest.csv", manifest_csv(manifest));
    batch.commit();
    out << "processed " << files.size() << " networks (" << failed << " failed) into "
        << config.out_dir.string() << '\n';
    // Only a corpus where nothing succeeded fails the run.
    return failed == files.size() ? results.front().status : 0;
  } catch (const std::exception& e) {
    err << "impactfield replicate: " << e.what() << '\n';
    return exit_status(e);
  }
}

}  // namespace impactfield
