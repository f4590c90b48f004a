#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "impactfield/graph.hpp"

namespace impactfield {

struct SpectralOptions {
  /// Matrices up to this dimension get a full dense eigendecomposition.
  std::size_t dense_threshold = 2000;
  std::size_t max_iterations = 20000;
  /// Relative convergence target for the iterative radius estimate.
  double radius_tolerance = 1e-10;
  /// Eigenpair residual target of the iterative top-k solver.
  double residual_tolerance = 1e-10;
  /// Seeds the start block of the iterative solver.
  std::uint64_t seed = 0x1f1d5eedULL;

  /// Defaults, with dense_threshold overridden by IMPACTFIELD_DENSE_THRESHOLD when set.
  static SpectralOptions from_environment();
};

struct RadiusEstimate {
  double value = 0.0;
  double iterative_value = 0.0;
  std::size_t iterations = 0;
  bool iterative_converged = false;
  bool zero_matrix = false;       // normalization by this value is impossible
  bool negative_weights = false;  // no Perron-Frobenius guarantees
  bool cross_checked = false;     // dense eigenvalues were computed and are authoritative
  double cross_check_gap = 0.0;   // |iterative - dense| / dense
  /// Collatz-Wielandt bounds taken over strictly positive iterates (nonnegative input only).
  /// The dense value is clamped into them.
  double bracket_lo = 0.0;
  double bracket_hi = INFINITY;
};

/// Iterative estimate from a deterministic start vector. When n <= dense_threshold the
/// dense eigenvalues are also computed and their max modulus is returned.
RadiusEstimate estimate_spectral_radius(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a,
                                        const SpectralOptions& opts = {});
RadiusEstimate estimate_spectral_radius(const Graph& g, const SpectralOptions& opts = {});

/// Max eigenvalue modulus of the adjacency matrix; 0 for a graph without (nonzero) edges.
double spectral_radius(const Graph& g, const SpectralOptions& opts = {});

/// How many modes to compute: all of them, or the k of largest modulus.
class ModeCount {
 public:
  static ModeCount full() { return ModeCount(std::nullopt); }
  static ModeCount top(std::size_t k) { return ModeCount(k); }
  bool is_full() const { return !k_.has_value(); }
  std::size_t k() const { return k_.value(); }

 private:
  explicit ModeCount(std::optional<std::size_t> k) : k_(k) {}
  std::optional<std::size_t> k_;
};

/// Eigenvalues ordered by nonincreasing modulus (ties: real part, then imaginary part,
/// descending) with matching right eigenvectors (columns) and left rows normalized so
/// that left_rows.row(l) * right_vectors.col(l) = 1.
///
/// Right vectors have unit 2-norm and their largest-magnitude entry is rotated onto the
/// positive real axis. A truncated decomposition always contains both members of every
/// complex-conjugate pair, so it may hold one mode more than requested.
struct SpectralDecomposition {
  std::size_t n = 0;
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_vectors;  // n x modes
  Eigen::MatrixXcd left_rows;      // modes x n
  std::vector<double> mode_residuals;
  double residual = 0.0;           // max over modes of |B s - lambda s| / |s|
  bool full = false;
  bool symmetric = false;
  bool iterative = false;
  double scale = 1.0;              // rho(A) when normalized, else 1

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Decomposes B = A / rho(A) (normalize) or B = A. Requires at least one edge.
SpectralDecomposition decompose(const Graph& g, bool normalize, ModeCount count,
                                const SpectralOptions& opts = {});

/// Decomposes an arbitrary real square matrix; `scale` is recorded verbatim.
SpectralDecomposition decompose_matrix(const Eigen::MatrixXd& b, ModeCount count,
                                       const SpectralOptions& opts = {}, double scale = 1.0);

struct Mode {
  std::complex<double> eigenvalue;
  Eigen::VectorXcd receive;  // right eigenvector s
  Eigen::VectorXcd send;     // left row s'
  std::complex<double> propagator_gain;  // 1 / (1 - gamma * eigenvalue)
};

struct ModeSet {
  std::vector<Mode> modes;
  std::size_t order = 0;
  double gamma = 0.0;
};

/// Takes the `order` leading modes, then adds any missing conjugate partners.
ModeSet select_modes(const SpectralDecomposition& decomp, double gamma, std::size_t order);

/// "mode,eigenvalue_re,eigenvalue_im,residual". Debugging aid, not a stable format.
std::string decomposition_to_csv(const SpectralDecomposition& decomp);
/// "node,mode,right_re,right_im,left_re,left_im".
std::string mode_vectors_to_csv(const SpectralDecomposition& decomp);

/// Ordering used by decompositions, exposed for tests.
std::vector<Eigen::Index> order_by_modulus(const Eigen::VectorXcd& values);

}  // namespace impactfield
