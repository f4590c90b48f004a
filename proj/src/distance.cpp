#include "impactfield/distance.hpp"

#include <algorithm>

#include "impactfield/csv.hpp"
#include "impactfield/kernels.hpp"

namespace impactfield {

std::uint32_t DistanceMatrix::max_finite() const {
  std::uint32_t best = 0;
  for (auto d : dist_) {
    if (d.finite()) best = std::max(best, d.value());
  }
  return best;
}

DistanceMatrix geodesic_distances(const Graph& g) {
  DistanceMatrix out;
  kernels::all_pairs_bfs(g, out);
  return out;
}

std::string distances_to_csv(const Graph& g, const DistanceMatrix& dist) {
  std::string out = "src,dst,dist\n";
  for (std::size_t i = 0; i < dist.n(); ++i) {
    for (std::size_t j = 0; j < dist.n(); ++j) {
      out += csv::escape(g.label(static_cast<NodeId>(i)));
      out += ',';
      out += csv::escape(g.label(static_cast<NodeId>(j)));
      out += ',';
      const Hops d = dist(i, j);
      out += d.finite() ? std::to_string(d.value()) : std::string("inf");
      out += '\n';
    }
  }
  return out;
}

}  // namespace impactfield
