#include "impactfield/impact.hpp"

#include <cmath>
#include <vector>

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "impactfield/errors.hpp"
#include "impactfield/kernels.hpp"

namespace impactfield {

namespace {

constexpr double kImaginaryResidueLimit = 1e-10;
constexpr double kSingularRcond = 1e-14;

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("gamma must lie strictly inside (0, 1), got " + std::to_string(gamma));
  }
}

}  // namespace

WeightMatrix WeightMatrix::from_parts(Eigen::MatrixXd normalized, double gamma, double rho) {
  check_gamma(gamma);
  if (normalized.rows() != normalized.cols()) throw ValidationError("weight matrix must be square");
  WeightMatrix w;
  w.gamma_ = gamma;
  w.rho_ = rho;
  w.b_ = std::move(normalized);
  w.w_ = gamma * w.b_;
  return w;
}

WeightMatrix WeightMatrix::with_gamma(double gamma) const {
  check_gamma(gamma);
  WeightMatrix w;
  w.gamma_ = gamma;
  w.rho_ = rho_;
  w.b_ = b_;
  w.w_ = gamma * b_;
  return w;
}

WeightMatrix build_weight(const Graph& g, double gamma, double rho) {
  check_gamma(gamma);
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw NormalizationError("cannot normalize adjacency: spectral radius is " + std::to_string(rho));
  }
  return WeightMatrix::from_parts(g.dense_adjacency() / rho, gamma, rho);
}

WeightMatrix build_weight(const Graph& g, double gamma, const SpectralOptions& opts) {
  check_gamma(gamma);
  if (g.edge_count() == 0) throw NormalizationError("cannot normalize adjacency: graph has no edges");
  const auto est = estimate_spectral_radius(g, opts);
  if (est.zero_matrix) throw NormalizationError("cannot normalize adjacency: all weights are zero");
  return build_weight(g, gamma, est.value);
}

std::vector<double> gamma_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 5; ++k) grid.push_back(1.0 - std::ldexp(1.0, -k));
  return grid;
}

ImpactMatrix exact_propagator(const WeightMatrix& w) {
  const auto n = static_cast<Eigen::Index>(w.n());
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - w.W();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const double rcond = n == 0 ? 1.0 : lu.rcond();
  if (!(rcond > kSingularRcond)) {
    throw SolverError("I - W is numerically singular", rcond > 0 ? 1.0 / rcond : INFINITY);
  }
  ImpactMatrix out;
  out.values = lu.solve(Eigen::MatrixXd::Identity(n, n));
  // One step of iterative refinement.
  const Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - system * out.values;
  out.values += lu.solve(residual);
  if (!out.values.allFinite()) throw SolverError("propagator solve produced non-finite values", 1.0 / rcond);
  out.kind = ImpactKind::kExact;
  out.gamma = w.gamma();
  return out;
}

ImpactMatrix series_oracle(const WeightMatrix& w, std::size_t terms) {
  if (terms == 0) throw ValidationError("series_oracle needs at least one term");
  const auto n = static_cast<Eigen::Index>(w.n());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n) + w.W();
  Eigen::MatrixXd power = w.W();
  for (std::size_t t = 2; t <= terms; ++t) {
    power = power * w.W();
    sum += power;
  }
  return {std::move(sum), ImpactKind::kSeriesOracle, 0, w.gamma()};
}

std::size_t series_terms_for(double gamma, double target) {
  check_gamma(gamma);
  return static_cast<std::size_t>(std::ceil(std::log(target * (1.0 - gamma)) / std::log(gamma)));
}

Eigen::VectorXd equilibrium_state(const WeightMatrix& w, const Eigen::VectorXd& z) {
  if (static_cast<std::size_t>(z.size()) != w.n()) {
    throw ValidationError("forcing vector has length " + std::to_string(z.size()) +
                          ", expected " + std::to_string(w.n()));
  }
  if (!z.allFinite()) throw ValidationError("forcing vector must be finite");
  const auto n = static_cast<Eigen::Index>(w.n());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd::Identity(n, n) - w.W());
  return lu.solve(z);
}

SpectralDecomposition decompose(const WeightMatrix& w, ModeCount count, const SpectralOptions& opts) {
  return decompose_matrix(w.B(), count, opts, w.rho());
}

ImpactMatrix approx_impact(const WeightMatrix& w, const ModeSet& modes, const DistanceMatrix& dist) {
  if (modes.gamma != w.gamma()) {
    throw ValidationError("mode set built for gamma " + std::to_string(modes.gamma) +
                          " applied to weights with gamma " + std::to_string(w.gamma()));
  }
  if (dist.n() != w.n()) throw ValidationError("distance matrix does not match weight matrix size");
  std::vector<kernels::SpectralTerm> terms;
  terms.reserve(modes.modes.size());
  for (const auto& m : modes.modes) {
    if (static_cast<std::size_t>(m.receive.size()) != w.n() ||
        static_cast<std::size_t>(m.send.size()) != w.n()) {
      throw ValidationError("mode vectors do not match weight matrix size");
    }
    terms.push_back({modes.gamma * m.eigenvalue, m.propagator_gain, &m.receive, &m.send});
  }
  ImpactMatrix out;
  const double residue = kernels::spectral_impact(terms, dist, out.values);
  if (!(residue <= kImaginaryResidueLimit)) {
    throw ConjugateClosureError("imaginary residue " + std::to_string(residue) +
                                " exceeds tolerance; mode set is not conjugate-closed");
  }
  out.kind = ImpactKind::kApprox;
  out.order = modes.order;
  out.gamma = w.gamma();
  return out;
}

ImpactMatrix distance_factored_impact(const WeightMatrix& w, const DistanceMatrix& dist) {
  return distance_factored_impact(w, dist, exact_propagator(w));
}

ImpactMatrix distance_factored_impact(const WeightMatrix& w, const DistanceMatrix& dist,
                                      const ImpactMatrix& exact) {
  if (dist.n() != w.n() || exact.n() != w.n()) {
    throw ValidationError("distance/propagator size does not match weight matrix");
  }
  const auto n = static_cast<Eigen::Index>(w.n());
  // Column-major B^T as sparse so that y <- B^T y walks row i of B^d forward cheaply.
  const Eigen::SparseMatrix<double> bt = w.B().transpose().sparseView();
  const Eigen::MatrixXd& prop = exact.values;
  ImpactMatrix out;
  out.values = Eigen::MatrixXd::Zero(n, n);
  out.kind = ImpactKind::kDistanceFactored;
  out.gamma = w.gamma();

#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = dist.row(static_cast<std::size_t>(i));
    std::uint32_t reach = 0;
    for (auto d : row) {
      if (d.finite()) reach = std::max(reach, d.value());
    }
    std::vector<std::vector<Eigen::Index>> by_distance(reach + 1);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (row[static_cast<std::size_t>(j)].finite()) {
        by_distance[row[static_cast<std::size_t>(j)].value()].push_back(j);
      }
    }
    Eigen::VectorXd walk = Eigen::VectorXd::Unit(n, i);  // (e_i^T B^d)^T
    double attenuation = 1.0;
    for (std::uint32_t d = 0; d <= reach; ++d) {
      if (d > 0) {
        walk = bt * walk;
        attenuation *= w.gamma();
      }
      for (const auto j : by_distance[d]) out.values(i, j) = attenuation * walk.dot(prop.col(j));
    }
  }
  return out;
}

}  // namespace impactfield
