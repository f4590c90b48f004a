#pragma once

// Data-parallel inner loops. Each OpenMP kernel has a serial twin that is kept as the
// reference in tests and benchmarks; the two must agree bit for bit.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "impactfield/distance.hpp"
#include "impactfield/graph.hpp"

namespace impactfield::kernels {

void all_pairs_bfs(const Graph& g, DistanceMatrix& out);
void all_pairs_bfs_serial(const Graph& g, DistanceMatrix& out);

/// Per-mode inputs of the spectral impact sum.
struct SpectralTerm {
  std::complex<double> attenuated;  // gamma * lambda
  std::complex<double> gain;        // 1 / (1 - gamma * lambda)
  const Eigen::VectorXcd* receive;  // right eigenvector
  const Eigen::VectorXcd* send;     // matching row of the inverse eigenvector matrix
};

/// out(i, j) = sum over terms of attenuated^d(i,j) * gain * receive_i * send_j, with zero
/// for unreachable pairs. Returns the largest imaginary residue relative to
/// (1 + |real part|) so callers can enforce conjugate closure.
double spectral_impact(std::span<const SpectralTerm> terms, const DistanceMatrix& dist,
                       Eigen::MatrixXd& out);
double spectral_impact_serial(std::span<const SpectralTerm> terms, const DistanceMatrix& dist,
                              Eigen::MatrixXd& out);

}  // namespace impactfield::kernels
