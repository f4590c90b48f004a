#include "impactfield/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace impactfield::kernels {

namespace {

void bfs_from(const Graph& g, NodeId source, std::span<Hops> row, std::vector<NodeId>& queue) {
  queue.clear();
  queue.push_back(source);
  row[source] = Hops(0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const Hops next(row[u].value() + 1);
    for (NodeId v : g.neighbors(u)) {
      if (!row[v].finite()) {
        row[v] = next;
        queue.push_back(v);
      }
    }
  }
}

struct PowerTable {
  std::vector<std::complex<double>> weighted;  // [mode * (max_d + 1) + d]
  std::size_t stride = 0;
};

PowerTable powers(std::span<const SpectralTerm> terms, std::uint32_t max_d) {
  PowerTable table;
  table.stride = static_cast<std::size_t>(max_d) + 1;
  table.weighted.resize(terms.size() * table.stride);
  for (std::size_t m = 0; m < terms.size(); ++m) {
    std::complex<double> p = 1.0;
    for (std::size_t d = 0; d < table.stride; ++d) {
      table.weighted[m * table.stride + d] = p * terms[m].gain;
      p *= terms[m].attenuated;
    }
  }
  return table;
}

double impact_row(std::span<const SpectralTerm> terms, const PowerTable& table,
                  std::span<const Hops> dist_row, Eigen::Index i, Eigen::MatrixXd& out) {
  double residue = 0.0;
  const auto n = static_cast<Eigen::Index>(dist_row.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const Hops d = dist_row[j];
    if (!d.finite()) {
      out(i, j) = 0.0;
      continue;
    }
    std::complex<double> sum = 0.0;
    for (std::size_t m = 0; m < terms.size(); ++m) {
      sum += table.weighted[m * table.stride + d.value()] * (*terms[m].receive)(i) *
             (*terms[m].send)(j);
    }
    out(i, j) = sum.real();
    residue = std::max(residue, std::abs(sum.imag()) / (1.0 + std::abs(sum.real())));
  }
  return residue;
}

}  // namespace

void all_pairs_bfs(const Graph& g, DistanceMatrix& out) {
  out = DistanceMatrix(g.n());
  const auto n = static_cast<std::ptrdiff_t>(g.n());
#pragma omp parallel
  {
    std::vector<NodeId> queue;
    queue.reserve(g.n());
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t s = 0; s < n; ++s) {
      bfs_from(g, static_cast<NodeId>(s), out.row(static_cast<std::size_t>(s)), queue);
    }
  }
}

void all_pairs_bfs_serial(const Graph& g, DistanceMatrix& out) {
  out = DistanceMatrix(g.n());
  std::vector<NodeId> queue;
  queue.reserve(g.n());
  for (std::size_t s = 0; s < g.n(); ++s) bfs_from(g, static_cast<NodeId>(s), out.row(s), queue);
}

double spectral_impact(std::span<const SpectralTerm> terms, const DistanceMatrix& dist,
                       Eigen::MatrixXd& out) {
  const auto table = powers(terms, dist.max_finite());
  const auto n = static_cast<Eigen::Index>(dist.n());
  out.resize(n, n);
  double residue = 0.0;
#pragma omp parallel for schedule(static) reduction(max : residue)
  for (Eigen::Index i = 0; i < n; ++i) {
    residue = std::max(residue, impact_row(terms, table, dist.row(static_cast<std::size_t>(i)), i, out));
  }
  return residue;
}

double spectral_impact_serial(std::span<const SpectralTerm> terms, const DistanceMatrix& dist,
                              Eigen::MatrixXd& out) {
  const auto table = powers(terms, dist.max_finite());
  const auto n = static_cast<Eigen::Index>(dist.n());
  out.resize(n, n);
  double residue = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    residue = std::max(residue, impact_row(terms, table, dist.row(static_cast<std::size_t>(i)), i, out));
  }
  return residue;
}

}  // namespace impactfield::kernels
