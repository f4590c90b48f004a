#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "impactfield/distance.hpp"
#include "impactfield/errors.hpp"
#include "impactfield/graph.hpp"
#include "impactfield/impact.hpp"
#include "impactfield/spectral.hpp"

namespace impactfield {

enum class Treatment { kDirected, kSymmetrized };

std::string_view to_string(Treatment t);
/// Accepts "directed" and "symmetrized"; throws ValidationError otherwise.
Treatment parse_treatment(std::string_view text);

/// ln of a nonpositive mean impact.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Fewer dyads than a correlation needs, or nothing to average.
class InsufficientDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Pearson correlation with a constant vector.
class UndefinedCorrelationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct CurvePoint {
  std::uint32_t distance = 0;
  double mean_impact = 0.0;
  std::size_t n_pairs = 0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct DecayCurve {
  double gamma = 0.0;
  Treatment treatment = Treatment::kDirected;
  std::vector<CurvePoint> points;  // strictly increasing distance, all >= 1
};

/// Mean impact over ordered pairs at each finite distance d >= 1. The diagonal and
/// unreachable pairs are excluded. InsufficientDataError when no such pair exists.
DecayCurve mean_impact_by_distance(const ImpactMatrix& impact, const DistanceMatrix& dist,
                                   Treatment treatment = Treatment::kDirected);

struct ExponentialFit {
  double slope = 0.0;       // per hop, natural log scale
  double intercept = 0.0;
  double r_squared = 0.0;   // 0 by convention when ln(mean) has no variance
  std::uint32_t d_min = 0;  // realized range of the retained points
  std::uint32_t d_max = 0;
  std::size_t points = 0;
};

/// Unweighted least squares of ln(mean_impact) on distance over points in [d_min, d_max].
ExponentialFit fit_exponential(const DecayCurve& curve, std::uint32_t d_min, std::uint32_t d_max);

enum class CorrelationScale { kRaw, kLogLog };

struct DyadCorrelation {
  double pearson_r = 0.0;
  std::size_t n_dyads = 0;
};

/// Pearson correlation of exact vs approximate impact over ordered pairs with finite
/// distance >= 1. The log-log variant keeps only dyads where both values are positive.
DyadCorrelation dyad_correlation(const ImpactMatrix& exact, const ImpactMatrix& approx,
                                 const DistanceMatrix& dist,
                                 CorrelationScale scale = CorrelationScale::kRaw);

struct CorrelationRecord {
  std::string network;
  double gamma = 0.0;
  Treatment treatment = Treatment::kDirected;
  std::size_t order = 1;
  double pearson_r = 0.0;
  std::size_t n_dyads = 0;
};

/// Everything computed for one (treatment, gamma) cell, handed to StudyOptions::on_cell
/// before the matrices are released.
struct CellView {
  Treatment treatment;
  double gamma;
  const Graph& graph;
  const DistanceMatrix& dist;
  const ImpactMatrix& exact;
  const std::vector<ImpactMatrix>& approx;  // parallel to StudyOptions orders
  const std::vector<std::size_t>& orders;
};

struct StudyOptions {
  std::string network_id = "network";
  /// Empty selects DIRECTED and SYMMETRIZED for digraphs, SYMMETRIZED otherwise.
  std::vector<Treatment> treatments;
  std::uint32_t fit_d_min = 1;
  std::uint32_t fit_d_max = 6;
  CorrelationScale scale = CorrelationScale::kRaw;
  SpectralOptions spectral;
  std::function<void(const CellView&)> on_cell;
};

struct StudyCell {
  std::string network;
  Treatment treatment = Treatment::kDirected;
  double gamma = 0.0;
  std::optional<DecayCurve> curve;
  std::optional<ExponentialFit> fit;
  std::vector<CorrelationRecord> correlations;
  std::vector<std::string> notes;  // suppressed outputs and why
  std::optional<std::string> error;
  std::optional<ErrorClass> error_class;
};

/// Runs the full comparison for each treatment x gamma: exact propagator, decay curve and
/// fit, and one correlation record per order. A failing cell records its error and the
/// sweep continues. Cells come back ordered by treatment, then gamma as given.
std::vector<StudyCell> run_study(const Graph& g, const std::vector<double>& gammas,
                                 const std::vector<std::size_t>& orders,
                                 const StudyOptions& opts = {});

}  // namespace impactfield
