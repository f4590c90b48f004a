#include "impactfield/spectral.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "impactfield/errors.hpp"
#include "random.hpp"

namespace impactfield {

namespace {

using SparseRow = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Eigen::Index;

constexpr double kModulusTie = 1e-9;
constexpr double kRealTolerance = 1e-12;
constexpr double kClusterTolerance = 1e-6;
constexpr double kDefectTolerance = 1e-10;
constexpr double kResidualLimit = 1e-8;
constexpr double kBiorthogonalityLimit = 1e-8;

double scale_of(std::complex<double> z) { return std::max(1.0, std::abs(z)); }

bool is_real(std::complex<double> z) {
  return std::abs(z.imag()) <= kRealTolerance * scale_of(z);
}

// Unit 2-norm, largest-magnitude entry (first one on ties) rotated onto the positive real
// axis.
void canonicalize(Eigen::Ref<Eigen::VectorXcd> v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  Index arg = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best) {
      best = mag;
      arg = i;
    }
  }
  const std::complex<double> phase = std::conj(v(arg)) / best;
  v *= phase;
  v(arg) = std::complex<double>(v(arg).real(), 0.0);
}

bool exactly_symmetric(const Eigen::MatrixXd& b) {
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = j + 1; i < b.rows(); ++i) {
      if (b(i, j) != b(j, i)) return false;
    }
  }
  return true;
}

bool exactly_symmetric(const SparseRow& b) {
  SparseRow t = b.transpose();
  if (t.nonZeros() != b.nonZeros()) return false;
  return (SparseRow(b - t)).norm() == 0.0;
}

Eigen::MatrixXcd sparse_times(const SparseRow& b, const Eigen::MatrixXcd& y) {
  Eigen::MatrixXd re = b * y.real();
  Eigen::MatrixXd im = b * y.imag();
  Eigen::MatrixXcd out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = im;
  return out;
}

std::vector<double> residuals(const SparseRow& b, const Eigen::VectorXcd& values,
                              const Eigen::MatrixXcd& vectors) {
  const Eigen::MatrixXcd by = sparse_times(b, vectors);
  std::vector<double> out(static_cast<std::size_t>(values.size()));
  for (Index l = 0; l < values.size(); ++l) {
    const double norm = vectors.col(l).norm();
    out[static_cast<std::size_t>(l)] =
        norm == 0.0 ? 0.0 : (by.col(l) - values(l) * vectors.col(l)).norm() / norm;
  }
  return out;
}

bool is_conjugate(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - std::conj(b)) <= kClusterTolerance * scale_of(a);
}

// Index of the mode whose eigenvalue is closest to conj(values(l)).
Index conjugate_partner(const Eigen::VectorXcd& values, Index l) {
  const auto target = std::conj(values(l));
  Index best = -1;
  double gap = INFINITY;
  for (Index m = 0; m < values.size(); ++m) {
    if (m == l) continue;
    const double d = std::abs(values(m) - target);
    if (d < gap) {
      gap = d;
      best = m;
    }
  }
  return best;
}

// Leading `k` positions of an ordered spectrum extended to be conjugate-closed.
std::vector<Index> closed_prefix(const Eigen::VectorXcd& ordered, std::size_t k) {
  std::vector<Index> keep;
  const auto limit = std::min<Index>(static_cast<Index>(k), ordered.size());
  for (Index l = 0; l < limit; ++l) keep.push_back(l);
  for (Index l = 0; l < limit; ++l) {
    if (is_real(ordered(l))) continue;
    const Index partner = conjugate_partner(ordered, l);
    if (partner < 0 || !is_conjugate(ordered(partner), ordered(l))) continue;
    if (std::find(keep.begin(), keep.end(), partner) == keep.end()) {
      keep.push_back(partner);
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

struct OrderedSpectrum {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

OrderedSpectrum reorder(const Eigen::VectorXcd& values, const Eigen::MatrixXcd& vectors) {
  const auto order = order_by_modulus(values);
  OrderedSpectrum out;
  out.values.resize(values.size());
  out.vectors.resize(vectors.rows(), values.size());
  for (std::size_t l = 0; l < order.size(); ++l) {
    const auto dst = static_cast<Index>(l);
    out.values(dst) = values(order[l]);
    if (is_real(out.values(dst))) out.values(dst) = out.values(dst).real();
    out.vectors.col(dst) = vectors.col(order[l]);
    canonicalize(out.vectors.col(dst));
  }
  return out;
}

// Left rows for the selected right modes. Within each cluster of (numerically) equal
// eigenvalues the rows are (U^T S)^{-1} U^T, so s'_a . s_b = delta_ab across the cluster.
Eigen::MatrixXcd biorthogonal_left_rows(const OrderedSpectrum& right, const OrderedSpectrum& left,
                                        const std::vector<Index>& selected) {
  const Index n = right.vectors.rows();
  Eigen::MatrixXcd rows(static_cast<Index>(selected.size()), n);
  for (std::size_t pos = 0; pos < selected.size(); ++pos) {
    const Index l = selected[pos];
    const auto lambda = right.values(l);
    const double tol = kClusterTolerance * scale_of(lambda);
    std::vector<Index> cr, cl;
    for (Index m = 0; m < right.values.size(); ++m) {
      if (std::abs(right.values(m) - lambda) <= tol) cr.push_back(m);
    }
    for (Index m = 0; m < left.values.size(); ++m) {
      if (std::abs(left.values(m) - lambda) <= tol) cl.push_back(m);
    }
    if (cr.size() != cl.size()) {
      throw DefectivenessError("eigenvalue cluster at (" + std::to_string(lambda.real()) + ", " +
                               std::to_string(lambda.imag()) + ") has " +
                               std::to_string(cr.size()) + " right but " +
                               std::to_string(cl.size()) + " left eigenvectors");
    }
    const auto c = static_cast<Index>(cr.size());
    Eigen::MatrixXcd s(n, c), u(n, c);
    for (Index q = 0; q < c; ++q) {
      s.col(q) = right.vectors.col(cr[static_cast<std::size_t>(q)]);
      u.col(q) = left.vectors.col(cl[static_cast<std::size_t>(q)]).normalized();
    }
    const Eigen::MatrixXcd overlap = u.transpose() * s;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap);
    const double sigma_min = svd.singularValues()(c - 1);
    if (!(sigma_min >= kDefectTolerance)) {
      throw DefectivenessError("left/right eigenvector overlap " + std::to_string(sigma_min) +
                               " below " + std::to_string(kDefectTolerance) +
                               "; matrix is numerically defective");
    }
    const Eigen::MatrixXcd cluster_rows = overlap.partialPivLu().solve(u.transpose());
    const auto at = std::find(cr.begin(), cr.end(), l) - cr.begin();
    rows.row(static_cast<Index>(pos)) = cluster_rows.row(at);
  }
  return rows;
}

SpectralDecomposition assemble(const SparseRow& b, const OrderedSpectrum& right,
                               const std::vector<Index>& selected, Eigen::MatrixXcd left_rows,
                               bool full, bool symmetric, bool iterative, double scale) {
  SpectralDecomposition d;
  d.n = static_cast<std::size_t>(b.rows());
  d.full = full;
  d.symmetric = symmetric;
  d.iterative = iterative;
  d.scale = scale;
  const auto m = static_cast<Index>(selected.size());
  d.eigenvalues.resize(m);
  d.right_vectors.resize(b.rows(), m);
  for (Index q = 0; q < m; ++q) {
    d.eigenvalues(q) = right.values(selected[static_cast<std::size_t>(q)]);
    d.right_vectors.col(q) = right.vectors.col(selected[static_cast<std::size_t>(q)]);
  }
  d.left_rows = std::move(left_rows);
  d.mode_residuals = residuals(b, d.eigenvalues, d.right_vectors);
  d.residual = d.mode_residuals.empty()
                   ? 0.0
                   : *std::max_element(d.mode_residuals.begin(), d.mode_residuals.end());
  if (!(d.residual <= kResidualLimit)) {
    throw ConvergenceError("eigenpair residual exceeds " + std::to_string(kResidualLimit),
                           d.residual);
  }
  return d;
}

SpectralDecomposition dense_decomposition(const Eigen::MatrixXd& b, ModeCount count, double scale) {
  const Index n = b.rows();
  const SparseRow sparse = b.sparseView();
  const std::size_t k = count.is_full() ? static_cast<std::size_t>(n) : count.k();
  const bool full = k >= static_cast<std::size_t>(n);

  if (exactly_symmetric(b)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    if (es.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver failed", INFINITY);
    const auto right = reorder(es.eigenvalues().cast<std::complex<double>>(),
                               es.eigenvectors().cast<std::complex<double>>());
    std::vector<Index> selected(std::min<std::size_t>(k, static_cast<std::size_t>(n)));
    std::iota(selected.begin(), selected.end(), 0);
    Eigen::MatrixXcd left(static_cast<Index>(selected.size()), n);
    for (std::size_t q = 0; q < selected.size(); ++q) {
      left.row(static_cast<Index>(q)) = right.vectors.col(selected[q]).transpose();
    }
    return assemble(sparse, right, selected, std::move(left), full, true, false, scale);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(b, true);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  const auto right = reorder(es.eigenvalues(), es.eigenvectors());

  if (full) {
    std::vector<Index> selected(static_cast<std::size_t>(n));
    std::iota(selected.begin(), selected.end(), 0);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(right.vectors);
    Eigen::MatrixXcd left = lu.inverse();
    if (!left.allFinite()) throw DefectivenessError("eigenvector matrix is singular");
    const double biorth =
        (left * right.vectors - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(biorth <= kBiorthogonalityLimit)) {
      throw DefectivenessError("eigenvector matrix is numerically singular (|S^-1 S - I| = " +
                               std::to_string(biorth) + ")");
    }
    for (Index l = 0; l < n; ++l) {
      // s' . s = 1 with unit s, so the normalized overlap is 1 / |s'|.
      if (!(1.0 / left.row(l).norm() >= kDefectTolerance)) {
        throw DefectivenessError("mode " + std::to_string(l) +
                                 " has vanishing left/right overlap; matrix is near-defective");
      }
    }
    return assemble(sparse, right, selected, std::move(left), true, false, false, scale);
  }

  Eigen::EigenSolver<Eigen::MatrixXd> est(b.transpose(), true);
  if (est.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  const auto left_basis = reorder(est.eigenvalues(), est.eigenvectors());
  const auto selected = closed_prefix(right.values, k);
  auto left = biorthogonal_left_rows(right, left_basis, selected);
  return assemble(sparse, right, selected, std::move(left), false, false, false, scale);
}

struct RitzResult {
  OrderedSpectrum spectrum;  // first `want` entries are converged
  double worst = INFINITY;
  std::size_t iterations = 0;
};

// Block power iteration with Rayleigh-Ritz extraction.
RitzResult subspace_iteration(const SparseRow& b, std::size_t want, bool symmetric,
                              const SpectralOptions& opts) {
  const Index n = b.rows();
  const Index p = std::min<Index>(n, static_cast<Index>(std::max(want + 10, 2 * want)));
  detail::Uniform rng(opts.seed);
  Eigen::MatrixXd q(n, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) q(i, j) = 2.0 * rng.next() - 1.0;
  }
  auto orthonormalize = [&](const Eigen::MatrixXd& z) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    return Eigen::MatrixXd(qr.householderQ() * Eigen::MatrixXd::Identity(n, p));
  };
  q = orthonormalize(q);

  RitzResult out;
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    const Eigen::MatrixXd z = b * q;
    const bool check = it % 5 == 0 || it == opts.max_iterations;
    if (check) {
      const Eigen::MatrixXd h = q.transpose() * z;
      Eigen::VectorXcd theta;
      Eigen::MatrixXcd v;
      if (symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
        theta = es.eigenvalues().cast<std::complex<double>>();
        v = es.eigenvectors().cast<std::complex<double>>();
      } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(h, true);
        theta = es.eigenvalues();
        v = es.eigenvectors();
      }
      const Eigen::MatrixXcd y = q.cast<std::complex<double>>() * v;
      out.spectrum = reorder(theta, y);
      const auto res = residuals(b, out.spectrum.values.head(static_cast<Index>(want)),
                                 out.spectrum.vectors.leftCols(static_cast<Index>(want)));
      out.worst = *std::max_element(res.begin(), res.end());
      out.iterations = it;
      if (out.worst <= opts.residual_tolerance) return out;
    }
    q = orthonormalize(z);
  }
  throw ConvergenceError("iterative eigensolver did not converge in " +
                             std::to_string(opts.max_iterations) + " iterations",
                         out.worst);
}

SpectralDecomposition iterative_decomposition(const SparseRow& b, ModeCount count,
                                              const SpectralOptions& opts, double scale) {
  const auto n = static_cast<std::size_t>(b.rows());
  const std::size_t k = count.is_full() ? n : std::min(count.k(), n);
  const std::size_t want = std::min(n, k + 1);
  const bool symmetric = exactly_symmetric(b);
  auto right = subspace_iteration(b, want, symmetric, opts);
  right.spectrum.values.conservativeResize(static_cast<Eigen::Index>(want));
  right.spectrum.vectors.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(want));
  const auto selected = closed_prefix(right.spectrum.values, k);

  Eigen::MatrixXcd left;
  if (symmetric) {
    left.resize(static_cast<Index>(selected.size()), b.rows());
    for (std::size_t q = 0; q < selected.size(); ++q) {
      left.row(static_cast<Index>(q)) = right.spectrum.vectors.col(selected[q]).transpose();
    }
  } else {
    const SparseRow bt = b.transpose();
    auto left_basis = subspace_iteration(bt, want, false, opts);
    left_basis.spectrum.values.conservativeResize(static_cast<Eigen::Index>(want));
    left_basis.spectrum.vectors.conservativeResize(Eigen::NoChange,
                                                   static_cast<Eigen::Index>(want));
    left = biorthogonal_left_rows(right.spectrum, left_basis.spectrum, selected);
  }
  return assemble(b, right.spectrum, selected, std::move(left), selected.size() == n, symmetric,
                  true, scale);
}

double dense_max_modulus(const SparseRow& a) {
  const Eigen::MatrixXd dense(a);
  if (exactly_symmetric(dense)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(dense, false);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

SpectralOptions SpectralOptions::from_environment() {
  SpectralOptions opts;
  if (const char* env = std::getenv("IMPACTFIELD_DENSE_THRESHOLD"); env && *env) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (*end != '\0' || value == 0) {
      throw ValidationError(std::string("IMPACTFIELD_DENSE_THRESHOLD must be a positive integer, got '") +
                            env + "'");
    }
    opts.dense_threshold = static_cast<std::size_t>(value);
  }
  return opts;
}

std::vector<Index> order_by_modulus(const Eigen::VectorXcd& values) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return std::abs(values(a)) > std::abs(values(b)); });
  auto tie_break = [&](Index a, Index b) {
    if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
    return values(a).imag() > values(b).imag();
  };
  std::size_t start = 0;
  while (start < idx.size()) {
    const double lead = std::abs(values(idx[start]));
    std::size_t end = start + 1;
    while (end < idx.size() &&
           lead - std::abs(values(idx[end])) <= kModulusTie * std::max(1.0, lead)) {
      ++end;
    }
    std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(start),
                     idx.begin() + static_cast<std::ptrdiff_t>(end), tie_break);
    start = end;
  }
  return idx;
}

RadiusEstimate estimate_spectral_radius(const SparseRow& a, const SpectralOptions& opts) {
  RadiusEstimate est;
  const Index n = a.rows();
  bool any_nonzero = false;
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseRow::InnerIterator it(a, k); it; ++it) {
      if (it.value() < 0) est.negative_weights = true;
      if (it.value() != 0) any_nonzero = true;
    }
  }
  if (!any_nonzero) {
    est.zero_matrix = true;
    est.iterative_converged = true;
    return est;
  }

  if (!est.negative_weights) {
    // Power iteration on A + I keeps the iterate strictly positive, which makes the
    // Collatz-Wielandt quotients min/max (Ax)_i / x_i valid bounds on rho(A).
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double previous = NAN;
    int stable = 0;
    double bracket_lo = 0.0, bracket_hi = INFINITY;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
      const Eigen::VectorXd y = a * x;
      const double top = x.maxCoeff();
      double lo = INFINITY, hi = 0.0;
      bool positive = true;
      for (Index i = 0; i < n; ++i) {
        if (x(i) < 1e-12 * top) {
          positive = false;
          continue;
        }
        const double r = y(i) / x(i);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      const double rayleigh = x.dot(y) / x.squaredNorm();
      est.iterations = it;
      if (positive) {
        bracket_lo = std::max(bracket_lo, lo);
        bracket_hi = std::min(bracket_hi, hi);
      }
      if (hi > 0 && hi - lo <= opts.radius_tolerance * hi) {
        est.iterative_value = 0.5 * (hi + lo);
        est.iterative_converged = true;
        break;
      }
      if (std::abs(rayleigh - previous) <= 1e-3 * opts.radius_tolerance * rayleigh) {
        if (++stable >= 10) {
          est.iterative_value = rayleigh;
          est.iterative_converged = true;
          break;
        }
      } else {
        stable = 0;
      }
      previous = rayleigh;
      est.iterative_value = rayleigh;
      x = (y + x).normalized();
    }
    est.bracket_lo = bracket_lo;
    est.bracket_hi = bracket_hi;
  } else {
    SpectralOptions local = opts;
    local.residual_tolerance = opts.radius_tolerance;
    try {
      const auto ritz = subspace_iteration(a, 1, exactly_symmetric(a), local);
      est.iterative_value = std::abs(ritz.spectrum.values(0));
      est.iterations = ritz.iterations;
      est.iterative_converged = true;
    } catch (const ConvergenceError&) {
      est.iterative_converged = false;
    }
  }

  if (static_cast<std::size_t>(n) <= opts.dense_threshold) {
    est.value = dense_max_modulus(a);
    if (est.bracket_lo <= est.bracket_hi) est.value = std::clamp(est.value, est.bracket_lo, est.bracket_hi);
    est.cross_checked = true;
    est.cross_check_gap = est.value > 0 ? std::abs(est.iterative_value - est.value) / est.value : 0.0;
  } else if (!est.iterative_converged) {
    throw ConvergenceError("spectral radius iteration did not converge",
                           std::abs(est.iterative_value));
  } else {
    est.value = est.iterative_value;
  }
  return est;
}

RadiusEstimate estimate_spectral_radius(const Graph& g, const SpectralOptions& opts) {
  if (g.n() == 0) throw ValidationError("spectral radius of an empty graph");
  return estimate_spectral_radius(g.sparse_adjacency(), opts);
}

double spectral_radius(const Graph& g, const SpectralOptions& opts) {
  return estimate_spectral_radius(g, opts).value;
}

SpectralDecomposition decompose_matrix(const Eigen::MatrixXd& b, ModeCount count,
                                       const SpectralOptions& opts, double scale) {
  if (b.rows() != b.cols() || b.rows() == 0) throw ValidationError("decompose: need a nonempty square matrix");
  if (!count.is_full() && count.k() == 0) throw ValidationError("decompose: k must be positive");
  if (static_cast<std::size_t>(b.rows()) <= opts.dense_threshold) {
    return dense_decomposition(b, count, scale);
  }
  const SparseRow sparse = b.sparseView();
  return iterative_decomposition(sparse, count, opts, scale);
}

SpectralDecomposition decompose(const Graph& g, bool normalize, ModeCount count,
                                const SpectralOptions& opts) {
  if (g.edge_count() == 0) throw ValidationError("decompose: graph has no edges");
  if (!count.is_full() && count.k() == 0) throw ValidationError("decompose: k must be positive");
  SparseRow a = g.sparse_adjacency();
  double scale = 1.0;
  if (normalize) {
    scale = estimate_spectral_radius(a, opts).value;
    if (!(scale > 0.0)) throw NormalizationError("cannot normalize: spectral radius is zero");
    a /= scale;
  }
  if (g.n() <= opts.dense_threshold) return dense_decomposition(Eigen::MatrixXd(a), count, scale);
  return iterative_decomposition(a, count, opts, scale);
}

ModeSet select_modes(const SpectralDecomposition& decomp, double gamma, std::size_t order) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie strictly inside (0, 1)");
  if (order == 0) throw ValidationError("order must be positive");
  if (order > decomp.size()) {
    throw ValidationError("order " + std::to_string(order) + " exceeds the " +
                          std::to_string(decomp.size()) + " available modes");
  }
  const auto keep = closed_prefix(decomp.eigenvalues, order);
  ModeSet set;
  set.order = order;
  set.gamma = gamma;
  for (const Index l : keep) {
    if (!is_real(decomp.eigenvalues(l))) {
      const Index partner = conjugate_partner(decomp.eigenvalues, l);
      if (partner < 0 || !is_conjugate(decomp.eigenvalues(partner), decomp.eigenvalues(l)) ||
          std::find(keep.begin(), keep.end(), partner) == keep.end()) {
        throw ValidationError("decomposition lacks the conjugate partner of mode " +
                              std::to_string(l));
      }
    }
    Mode m;
    m.eigenvalue = decomp.eigenvalues(l);
    m.receive = decomp.right_vectors.col(l);
    m.send = decomp.left_rows.row(l).transpose();
    m.propagator_gain = 1.0 / (1.0 - gamma * m.eigenvalue);
    set.modes.push_back(std::move(m));
  }
  return set;
}

namespace {
std::string num(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}
}  // namespace

std::string decomposition_to_csv(const SpectralDecomposition& decomp) {
  std::string out = "mode,eigenvalue_re,eigenvalue_im,residual\n";
  for (std::size_t l = 0; l < decomp.size(); ++l) {
    const auto lambda = decomp.eigenvalues(static_cast<Index>(l));
    out += std::to_string(l) + ',' + num(lambda.real()) + ',' + num(lambda.imag()) + ',' +
           num(decomp.mode_residuals[l]) + '\n';
  }
  return out;
}

std::string mode_vectors_to_csv(const SpectralDecomposition& decomp) {
  std::string out = "node,mode,right_re,right_im,left_re,left_im\n";
  for (std::size_t l = 0; l < decomp.size(); ++l) {
    for (std::size_t i = 0; i < decomp.n; ++i) {
      const auto r = decomp.right_vectors(static_cast<Index>(i), static_cast<Index>(l));
      const auto s = decomp.left_rows(static_cast<Index>(l), static_cast<Index>(i));
      out += std::to_string(i) + ',' + std::to_string(l) + ',' + num(r.real()) + ',' +
             num(r.imag()) + ',' + num(s.real()) + ',' + num(s.imag()) + '\n';
    }
  }
  return out;
}

}  // namespace impactfield
