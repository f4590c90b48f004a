#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "impactfield/distance.hpp"
#include "impactfield/graph.hpp"
#include "impactfield/spectral.hpp"

namespace impactfield {

/// W = gamma * B with B = A / rho(A), so rho(W) = gamma < 1 and the diffusion process
/// y <- W y + z converges. W(i, j) > 0 iff node j has immediate impact on node i.
class WeightMatrix {
 public:
  /// Assembles a weight matrix from an already normalized B. Only gamma and shape are
  /// validated; this is the entry point for degenerate inputs such as B = 0.
  static WeightMatrix from_parts(Eigen::MatrixXd normalized, double gamma, double rho);

  /// Same B and rho, different attenuation.
  WeightMatrix with_gamma(double gamma) const;

  std::size_t n() const { return static_cast<std::size_t>(b_.rows()); }
  double gamma() const { return gamma_; }
  double rho() const { return rho_; }
  const Eigen::MatrixXd& B() const { return b_; }
  const Eigen::MatrixXd& W() const { return w_; }

 private:
  WeightMatrix() = default;
  double gamma_ = 0.0;
  double rho_ = 0.0;
  Eigen::MatrixXd b_;
  Eigen::MatrixXd w_;
};

/// Throws ValidationError for gamma outside (0, 1) and NormalizationError when rho(A) = 0.
WeightMatrix build_weight(const Graph& g, double gamma, const SpectralOptions& opts = {});
/// As above with a precomputed rho(A).
WeightMatrix build_weight(const Graph& g, double gamma, double rho);

/// gamma = 1 - 2^-k for k = 1..5.
std::vector<double> gamma_grid();

enum class ImpactKind { kExact, kSeriesOracle, kDistanceFactored, kApprox };

/// values(i, j) is the total impact of j on i.
struct ImpactMatrix {
  Eigen::MatrixXd values;
  ImpactKind kind = ImpactKind::kExact;
  std::size_t order = 0;  // spectral order, kApprox only
  double gamma = 0.0;

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
};

/// (I - W)^-1 by LU solve against the identity. SolverError when I - W is numerically
/// singular.
ImpactMatrix exact_propagator(const WeightMatrix& w);

/// I + W + ... + W^terms.
ImpactMatrix series_oracle(const WeightMatrix& w, std::size_t terms);

/// Smallest T with gamma^(T+1) / (1 - gamma) <= target * gamma.
std::size_t series_terms_for(double gamma, double target = 1e-12);

/// Equilibrium (I - W)^-1 z of y(t) = W y(t-1) + z.
Eigen::VectorXd equilibrium_state(const WeightMatrix& w, const Eigen::VectorXd& z);

/// Decomposition of w.B(), reusable across every gamma sharing that B.
SpectralDecomposition decompose(const WeightMatrix& w, ModeCount count,
                                const SpectralOptions& opts = {});

/// Truncated spectral form: sum over modes of (gamma lambda)^d / (1 - gamma lambda) s_i s'_j
/// with d = d(i, j); unreachable pairs are 0. Throws ConjugateClosureError if the summed
/// imaginary part exceeds 1e-10 (1 + |value|).
ImpactMatrix approx_impact(const WeightMatrix& w, const ModeSet& modes, const DistanceMatrix& dist);

/// gamma^d (B^d (I - gamma B)^-1)(i, j) at d = d(i, j), evaluated row by row with repeated
/// sparse products. Agrees with exact_propagator wherever d is finite.
ImpactMatrix distance_factored_impact(const WeightMatrix& w, const DistanceMatrix& dist);
ImpactMatrix distance_factored_impact(const WeightMatrix& w, const DistanceMatrix& dist,
                                      const ImpactMatrix& exact);

}  // namespace impactfield
