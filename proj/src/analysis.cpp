#include "impactfield/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "impactfield/csv.hpp"

namespace impactfield {

std::string_view to_string(Treatment t) {
  return t == Treatment::kDirected ? "directed" : "symmetrized";
}

Treatment parse_treatment(std::string_view text) {
  if (text == "directed") return Treatment::kDirected;
  if (text == "symmetrized") return Treatment::kSymmetrized;
  throw ValidationError("unknown treatment '" + std::string(text) + "'");
}

DecayCurve mean_impact_by_distance(const ImpactMatrix& impact, const DistanceMatrix& dist,
                                   Treatment treatment) {
  if (impact.n() != dist.n()) throw ValidationError("impact and distance matrices differ in size");
  std::map<std::uint32_t, std::pair<double, std::size_t>> sums;
  const auto n = dist.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Hops d = dist(i, j);
      if (i == j || !d.finite() || d.value() == 0) continue;
      auto& [sum, count] = sums[d.value()];
      sum += impact.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      ++count;
    }
  }
  if (sums.empty()) throw InsufficientDataError("no pairs at finite distance >= 1; decay curve is empty");
  DecayCurve curve;
  curve.gamma = impact.gamma;
  curve.treatment = treatment;
  for (const auto& [d, acc] : sums) {
    curve.points.push_back({d, acc.first / static_cast<double>(acc.second), acc.second});
  }
  return curve;
}

ExponentialFit fit_exponential(const DecayCurve& curve, std::uint32_t d_min, std::uint32_t d_max) {
  std::vector<double> x, y;
  ExponentialFit fit;
  for (const auto& p : curve.points) {
    if (p.distance < d_min || p.distance > d_max) continue;
    if (!(p.mean_impact > 0.0)) {
      throw DomainError("mean impact " + csv::format_double(p.mean_impact) + " at distance " +
                        std::to_string(p.distance) + " is not positive; cannot take the log");
    }
    if (x.empty()) fit.d_min = p.distance;
    fit.d_max = p.distance;
    x.push_back(static_cast<double>(p.distance));
    y.push_back(std::log(p.mean_impact));
  }
  if (x.size() < 2) {
    throw ValidationError("exponential fit needs at least 2 points in [" + std::to_string(d_min) +
                          ", " + std::to_string(d_max) + "], have " + std::to_string(x.size()));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = x.size();
  if (syy == 0.0) {
    fit.r_squared = 0.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double r = y[k] - (fit.intercept + fit.slope * x[k]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

DyadCorrelation dyad_correlation(const ImpactMatrix& exact, const ImpactMatrix& approx,
                                 const DistanceMatrix& dist, CorrelationScale scale) {
  if (approx.kind != ImpactKind::kApprox) throw ValidationError("second matrix must be an approximation");
  if (exact.n() != dist.n() || approx.n() != dist.n()) {
    throw ValidationError("impact and distance matrices differ in size");
  }
  std::vector<double> a, b;
  const auto n = dist.n();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Hops d = dist(i, j);
      if (i == j || !d.finite()) continue;
      double u = exact.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      double v = approx.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (scale == CorrelationScale::kLogLog) {
        if (!(u > 0.0 && v > 0.0)) continue;
        u = std::log(u);
        v = std::log(v);
      }
      a.push_back(u);
      b.push_back(v);
    }
  }
  if (a.size() < 3) {
    throw InsufficientDataError("correlation needs at least 3 dyads, have " + std::to_string(a.size()));
  }
  const double m = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= m;
  mb /= m;
  double saa = 0.0, sbb = 0.0, sab = 0.0, qaa = 0.0, qbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
    sab += (a[k] - ma) * (b[k] - mb);
    qaa += a[k] * a[k];
    qbb += b[k] * b[k];
  }
  // Spread at rounding level counts as none.
  constexpr double kFlat = 1e-24;
  if (saa <= kFlat * qaa) saa = 0.0;
  if (sbb <= kFlat * qbb) sbb = 0.0;
  if (saa == 0.0 || sbb == 0.0) {
    throw UndefinedCorrelationError("correlation undefined: zero variance in " +
                                    std::string(saa == 0.0 ? "exact" : "approximate") + " impact");
  }
  return {std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0), a.size()};
}

namespace {

void record_failure(StudyCell& cell, const std::string& stage, const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  const std::string message = stage + ": " + e.what();
  if (!cell.error) {
    cell.error = message;
    cell.error_class = err ? err->error_class() : ErrorClass::kNumerical;
  } else {
    *cell.error += "; " + message;
  }
}

}  // namespace

std::vector<StudyCell> run_study(const Graph& g, const std::vector<double>& gammas,
                                 const std::vector<std::size_t>& orders, const StudyOptions& opts) {
  std::vector<Treatment> treatments = opts.treatments;
  if (treatments.empty()) {
    if (g.directed()) treatments.push_back(Treatment::kDirected);
    treatments.push_back(Treatment::kSymmetrized);
  }
  for (auto t : treatments) {
    if (t == Treatment::kDirected && !g.directed()) {
      throw ValidationError("directed treatment requested for an undirected graph");
    }
  }
  if (orders.empty()) throw ValidationError("at least one approximation order is required");
  for (auto k : orders) {
    if (k == 0) throw ValidationError("approximation orders must be positive");
  }
  const std::size_t max_order = *std::max_element(orders.begin(), orders.end());

  std::vector<StudyCell> cells;
  for (const Treatment treatment : treatments) {
    const Graph prepared = treatment == Treatment::kDirected ? g : symmetrize_weak(g).graph;
    const auto dist = geodesic_distances(prepared);

    std::optional<WeightMatrix> base;
    std::optional<SpectralDecomposition> decomp;
    std::optional<std::pair<std::string, std::exception_ptr>> setup_failure;
    try {
      RadiusEstimate est;
      if (prepared.n() > 0) est = estimate_spectral_radius(prepared.sparse_adjacency(), opts.spectral);
      if (prepared.n() == 0 || est.zero_matrix) {
        throw NormalizationError("cannot normalize adjacency: spectral radius is zero (no weighted edges)");
      }
      base = WeightMatrix::from_parts(prepared.dense_adjacency() / est.value, 0.5, est.value);
    } catch (const std::exception&) {
      setup_failure = {{"weights", std::current_exception()}};
    }
    if (base) {
      try {
        const auto count = max_order >= prepared.n() ? ModeCount::full() : ModeCount::top(max_order);
        decomp = decompose(*base, count, opts.spectral);
      } catch (const std::exception&) {
        setup_failure = {{"decomposition", std::current_exception()}};
      }
    }

    for (const double gamma : gammas) {
      StudyCell cell;
      cell.network = opts.network_id;
      cell.treatment = treatment;
      cell.gamma = gamma;
      if (!base) {
        try {
          std::rethrow_exception(setup_failure->second);
        } catch (const std::exception& e) {
          record_failure(cell, setup_failure->first, e);
        }
        cells.push_back(std::move(cell));
        continue;
      }
      std::string stage = "propagator";
      try {
        const auto w = base->with_gamma(gamma);
        const auto exact = exact_propagator(w);
        try {
          cell.curve = mean_impact_by_distance(exact, dist, treatment);
          cell.fit = fit_exponential(*cell.curve, opts.fit_d_min, opts.fit_d_max);
        } catch (const ValidationError& e) {
          cell.notes.push_back(std::string(cell.curve ? "fit" : "curve") + " suppressed: " + e.what());
        }

        stage = "decomposition";
        if (!decomp) std::rethrow_exception(setup_failure->second);
        stage = "approximation";
        std::vector<ImpactMatrix> approx;
        for (const auto order : orders) {
          approx.push_back(approx_impact(w, select_modes(*decomp, gamma, order), dist));
          try {
            const auto corr = dyad_correlation(exact, approx.back(), dist, opts.scale);
            cell.correlations.push_back(
                {opts.network_id, gamma, treatment, order, corr.pearson_r, corr.n_dyads});
          } catch (const ValidationError& e) {
            cell.notes.push_back("order " + std::to_string(order) + " correlation suppressed: " + e.what());
          }
        }
        if (opts.on_cell) opts.on_cell(CellView{treatment, gamma, prepared, dist, exact, approx, orders});
      } catch (const std::exception& e) {
        record_failure(cell, stage, e);
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace impactfield
