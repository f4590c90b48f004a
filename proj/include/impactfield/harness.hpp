#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "impactfield/analysis.hpp"

namespace impactfield {

enum class GeneratorKind { kErdosRenyi, kPreferential };

GeneratorKind parse_generator_kind(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kErdosRenyi;
  std::size_t n = 0;
  double p = 0.0;       // ER only
  std::size_t m = 1;    // preferential attachment only
  bool directed = false;  // ER only
  std::uint64_t seed = 0;

  Graph build() const;
  /// One-line description written into generated files.
  std::string describe() const;
};

struct RunConfig {
  std::optional<std::filesystem::path> input;
  std::optional<GeneratorSpec> generator;
  bool directed = true;
  /// Empty selects the default treatments for the input's directedness.
  std::vector<Treatment> treatments;
  std::vector<double> gammas = gamma_grid();
  std::vector<std::size_t> orders{1, 2};
  bool include_exact = false;  // per-dyad CSV
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::optional<std::size_t> dense_threshold;  // falls back to IMPACTFIELD_DENSE_THRESHOLD
  std::uint32_t fit_d_min = 1;
  std::uint32_t fit_d_max = 6;
  CorrelationScale scale = CorrelationScale::kRaw;
  std::string network_id;  // defaults to the input file stem

  /// Throws ValidationError. Creates the output directory and probes it for writes.
  void validate() const;
  SpectralOptions spectral_options() const;
};

struct ReplicateConfig {
  std::filesystem::path corpus;
  std::filesystem::path out_dir;
  std::size_t workers = 1;
  std::vector<double> gammas = gamma_grid();
  std::vector<std::size_t> orders{1, 2};
  std::uint64_t seed = 0;
  std::optional<std::size_t> dense_threshold;
  std::uint32_t fit_d_min = 1;
  std::uint32_t fit_d_max = 6;
  CorrelationScale scale = CorrelationScale::kRaw;

  void validate() const;
};

/// Files staged as temporaries in their target directory. commit() renames them all into
/// place; anything not committed is removed on destruction.
class OutputBatch {
 public:
  OutputBatch();
  OutputBatch(const OutputBatch&) = delete;
  OutputBatch& operator=(const OutputBatch&) = delete;
  ~OutputBatch();

  void write(const std::filesystem::path& target, std::string_view contents);
  /// Opens a temporary for streamed writes; the stream stays valid until commit or destruction.
  std::ostream& open(const std::filesystem::path& target);
  void commit();

 private:
  struct Entry;
  std::vector<std::unique_ptr<Entry>> entries_;
  bool committed_ = false;
};

// Row types for the machine-readable outputs.

struct CurveRow {
  std::string network;
  Treatment treatment = Treatment::kDirected;
  double gamma = 0.0;
  CurvePoint point;
  bool operator==(const CurveRow&) const = default;
};

struct FitRow {
  std::string network;
  Treatment treatment = Treatment::kDirected;
  double gamma = 0.0;
  std::uint32_t d_min = 0;
  std::uint32_t d_max = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool operator==(const FitRow&) const = default;
};

struct ManifestRow {
  std::string network;
  std::size_t n = 0;
  std::size_t edges = 0;
  double mean_degree = 0.0;
  std::uint32_t diameter = 0;
  std::string status;  // ok, partial or failed
  std::string reason;
  bool operator==(const ManifestRow&) const = default;
};

struct DyadRow {
  std::string src;
  std::string dst;
  std::optional<std::uint32_t> dist;
  double exact = 0.0;
  std::vector<double> approx;
  bool operator==(const DyadRow&) const = default;
};

inline constexpr std::string_view kCurvesHeader = "network,treatment,gamma,distance,mean_impact,n_pairs";
inline constexpr std::string_view kFitsHeader = "network,treatment,gamma,d_min,d_max,slope,intercept,r_squared";
inline constexpr std::string_view kCorrelationsHeader = "network,treatment,gamma,order,pearson_r,n_dyads";
inline constexpr std::string_view kManifestHeader = "network,n,edges,mean_degree,diameter,status,reason";

std::string curves_csv(const std::vector<StudyCell>& cells);
std::string fits_csv(const std::vector<StudyCell>& cells);
std::string correlations_csv(const std::vector<StudyCell>& cells);
std::string manifest_csv(const std::vector<ManifestRow>& rows);

std::vector<CurveRow> parse_curves_csv(std::string_view text);
std::vector<FitRow> parse_fits_csv(std::string_view text);
std::vector<CorrelationRecord> parse_correlations_csv(std::string_view text);
std::vector<ManifestRow> parse_manifest_csv(std::string_view text);
std::vector<DyadRow> parse_dyads_csv(std::string_view text);

/// "dyads_<treatment>_<gamma>.csv"
std::string dyad_file_name(Treatment t, double gamma);

/// Size statistics for the manifest. Mean degree is E/n for digraphs and 2E/n otherwise;
/// the diameter is taken over the largest weak component, ignoring arc direction.
ManifestRow describe_network(const std::string& id, const Graph& g);

/// Reads an edge-list file. Without an explicit `directed`, a "# impactfield: directed" or
/// "# impactfield: undirected" comment decides, and files without one are read as directed.
Graph load_edge_list(const std::filesystem::path& path, std::optional<bool> directed = std::nullopt);
std::optional<bool> directedness_hint(std::string_view text);

/// Each command returns the process exit status and writes diagnostics to `err`.
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_generate(const GeneratorSpec& spec, const std::filesystem::path& out_path, std::ostream& out,
                 std::ostream& err);
int cmd_replicate(const ReplicateConfig& config, std::ostream& out, std::ostream& err);

/// Exit status for an exception escaping a command.
int exit_status(const std::exception& e);

}  // namespace impactfield
