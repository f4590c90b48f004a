#include "doctest.h"
#include "impactfield/graph.hpp"
#include "impactfield/impact.hpp"
#include "impactfield/kernels.hpp"
#include "impactfield/spectral.hpp"

using namespace impactfield;

TEST_CASE("parallel BFS equals the serial reference") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = generate_er(150, 0.02, seed % 2 == 0, seed);
    DistanceMatrix parallel, serial;
    kernels::all_pairs_bfs(g, parallel);
    kernels::all_pairs_bfs_serial(g, serial);
    CHECK(parallel == serial);
  }
}

TEST_CASE("parallel spectral impact equals the serial reference bit for bit") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto g = generate_er(80, 0.06, seed % 2 == 1, seed);
    const auto w = build_weight(g, 0.875);
    const auto decomp = decompose(w, ModeCount::top(4));
    const auto modes = select_modes(decomp, 0.875, 3);
    std::vector<kernels::SpectralTerm> terms;
    for (const auto& m : modes.modes) {
      terms.push_back({0.875 * m.eigenvalue, m.propagator_gain, &m.receive, &m.send});
    }
    const auto dist = geodesic_distances(g);
    Eigen::MatrixXd a, b;
    const double ra = kernels::spectral_impact(terms, dist, a);
    const double rb = kernels::spectral_impact_serial(terms, dist, b);
    CHECK(ra == rb);
    CHECK((a.array() == b.array()).all());
  }
}
