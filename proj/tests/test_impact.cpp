#include <cmath>

#include "doctest.h"
#include "impactfield/distance.hpp"
#include "impactfield/errors.hpp"
#include "impactfield/graph.hpp"
#include "impactfield/impact.hpp"
#include "impactfield/spectral.hpp"

using namespace impactfield;

namespace {

Graph two_cycle(bool is_directed) {
  return is_directed ? Graph(2, true, {{0, 1, 1.0}, {1, 0, 1.0}}) : Graph(2, false, {{0, 1, 1.0}});
}

Graph cycle3() { return Graph(3, true, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}); }

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Fixed-point iteration of y <- W y + z, the process whose limit the propagator gives.
Eigen::VectorXd iterate_recurrence(const Eigen::MatrixXd& w, const Eigen::VectorXd& z, int steps) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(z.size());
  for (int t = 0; t < steps; ++t) y = w * y + z;
  return y;
}

}  // namespace

TEST_CASE("build_weight") {
  const Graph tri(3, false, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  auto w = build_weight(tri, 0.5);
  CHECK(w.rho() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(max_abs(w.W() - 0.25 * tri.dense_adjacency()) <= 1e-15);
  CHECK((w.W().array() == (w.gamma() * w.B()).array()).all());

  w = build_weight(two_cycle(true), 0.5);
  CHECK(max_abs(w.W() - 0.5 * two_cycle(true).dense_adjacency()) <= 1e-15);

  CHECK_THROWS_AS(build_weight(Graph(3, false, {}), 0.5), NormalizationError);
  CHECK_THROWS_AS(build_weight(tri, 1.0), ValidationError);
  CHECK_THROWS_AS(build_weight(tri, 0.0), ValidationError);
  CHECK_THROWS_AS(build_weight(tri, -0.3), ValidationError);
  CHECK_THROWS_AS(build_weight(tri, 0.5, 0.0), NormalizationError);
}

TEST_CASE("spectral radius of W equals gamma") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = generate_er(40, 0.1, seed % 2 == 0, seed);
    for (double gamma : gamma_grid()) {
      const auto w = build_weight(g, gamma);
      const Eigen::EigenSolver<Eigen::MatrixXd> es(w.W(), false);
      CHECK(std::abs(es.eigenvalues().cwiseAbs().maxCoeff() - gamma) <= 1e-8);
    }
  }
}

TEST_CASE("orientation: W(i, j) > 0 iff i nominates j") {
  const Graph g(3, true, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
  const auto w = build_weight(g, 0.5);
  CHECK(w.W()(0, 1) > 0);
  CHECK(w.W()(1, 0) == 0);
}

TEST_CASE("gamma_grid") {
  const auto grid = gamma_grid();
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == 0.5);
  CHECK(grid.back() == 0.96875);
  CHECK(grid == std::vector<double>{0.5, 0.75, 0.875, 0.9375, 0.96875});
}

TEST_CASE("exact_propagator closed forms") {
  const auto zero = WeightMatrix::from_parts(Eigen::MatrixXd::Zero(4, 4), 0.5, 1.0);
  CHECK(max_abs(exact_propagator(zero).values - Eigen::MatrixXd::Identity(4, 4)) == 0.0);

  Eigen::Matrix2d expected;
  expected << 4.0 / 3, 2.0 / 3, 2.0 / 3, 4.0 / 3;
  for (bool d : {true, false}) {
    const auto p = exact_propagator(build_weight(two_cycle(d), 0.5));
    CHECK(p.kind == ImpactKind::kExact);
    CHECK(max_abs(p.values - expected) <= 1e-12);
  }

  const auto p3 = exact_propagator(build_weight(cycle3(), 0.5));
  // Entry (i, j) at cyclic distance d = (j - i) mod 3 is gamma^d / (1 - gamma^3).
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int d = ((j - i) % 3 + 3) % 3;
      CHECK(p3.values(i, j) == doctest::Approx(std::pow(0.5, d) / (1 - 0.125)).epsilon(1e-12));
    }
  }
  CHECK(p3.values(0, 1) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("exact_propagator detects a singular system") {
  Eigen::Matrix2d b;
  b << 0, 2, 2, 0;  // deliberately not normalized: gamma * B has eigenvalue 1
  const auto w = WeightMatrix::from_parts(b, 0.5, 1.0);
  CHECK_THROWS_AS(exact_propagator(w), SolverError);
}

TEST_CASE("series_oracle") {
  const auto w = build_weight(two_cycle(false), 0.5);
  const auto one = series_oracle(w, 1);
  CHECK(one.kind == ImpactKind::kSeriesOracle);
  CHECK(max_abs(one.values - (Eigen::MatrixXd::Identity(2, 2) + w.W())) == 0.0);
  // Tail bound gamma^41 / (1 - gamma) ~ 9.1e-13.
  CHECK(max_abs(series_oracle(w, 40).values - exact_propagator(w).values) <= 1e-10);
  CHECK_THROWS_AS(series_oracle(w, 0), ValidationError);

  const auto g = generate_er(20, 0.2, true, 4);
  const auto wg = build_weight(g, 0.75);
  Eigen::MatrixXd previous = series_oracle(wg, 1).values;
  for (std::size_t t = 2; t < 12; ++t) {
    const Eigen::MatrixXd next = series_oracle(wg, t).values;
    CHECK((next.array() >= previous.array()).all());
    previous = next;
  }
}

TEST_CASE("series_terms_for follows the geometric tail bound") {
  for (double gamma : gamma_grid()) {
    const auto t = series_terms_for(gamma);
    CHECK(std::pow(gamma, static_cast<double>(t) + 1) / (1 - gamma) <= 1e-12 * gamma * (1 + 1e-9));
    CHECK(std::pow(gamma, static_cast<double>(t)) / (1 - gamma) > 1e-12 * gamma);
  }
  CHECK(series_terms_for(0.5) == 41);
}

TEST_CASE("equilibrium_state") {
  const auto zero = WeightMatrix::from_parts(Eigen::MatrixXd::Zero(3, 3), 0.5, 1.0);
  const Eigen::Vector3d z(1.5, -2.0, 0.25);
  CHECK(max_abs(equilibrium_state(zero, z) - z) == 0.0);

  const auto w = build_weight(two_cycle(true), 0.5);
  CHECK(max_abs(equilibrium_state(w, Eigen::Vector2d(1, 1)) - Eigen::Vector2d(2, 2)) <= 1e-12);
  CHECK(max_abs(equilibrium_state(w, Eigen::Vector2d(1, 0)) - Eigen::Vector2d(4.0 / 3, 2.0 / 3)) <= 1e-12);
  CHECK_THROWS_AS(equilibrium_state(w, Eigen::Vector3d(1, 0, 0)), ValidationError);
  CHECK_THROWS_AS(equilibrium_state(w, Eigen::Vector2d(NAN, 0)), ValidationError);

  // Limit of the difference equation.
  const auto g = generate_er(30, 0.15, true, 8);
  const auto wg = build_weight(g, 0.875);
  Eigen::VectorXd forcing(30);
  for (int i = 0; i < 30; ++i) forcing(i) = std::sin(1.0 + i);
  CHECK(max_abs(equilibrium_state(wg, forcing) - iterate_recurrence(wg.W(), forcing, 2000)) <= 1e-10);
}

TEST_CASE("approx_impact on the single edge") {
  const auto g = two_cycle(false);
  const auto w = build_weight(g, 0.5);
  const auto dist = geodesic_distances(g);
  const auto decomp = decompose(w, ModeCount::full());

  const auto first = approx_impact(w, select_modes(decomp, 0.5, 1), dist);
  CHECK(first.kind == ImpactKind::kApprox);
  CHECK(first.order == 1);
  CHECK(first.values(0, 1) == doctest::Approx(0.5).epsilon(1e-12));

  const auto second = approx_impact(w, select_modes(decomp, 0.5, 2), dist);
  CHECK(second.values(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(second.values(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(max_abs(second.values - exact_propagator(w).values) <= 1e-12);
}

TEST_CASE("approx_impact sets unreachable pairs to zero") {
  const Graph g(4, false, {{0, 1, 1.0}, {2, 3, 2.0}});
  const auto w = build_weight(g, 0.75);
  const auto dist = geodesic_distances(g);
  const auto approx = approx_impact(w, select_modes(decompose(w, ModeCount::full()), 0.75, 4), dist);
  CHECK(approx.values(0, 2) == 0.0);
  CHECK(approx.values(3, 1) == 0.0);
  CHECK(max_abs(approx.values - exact_propagator(w).values) <= 1e-10);
}

TEST_CASE("approx_impact validation") {
  const auto g = cycle3();
  const auto w = build_weight(g, 0.5);
  const auto dist = geodesic_distances(g);
  const auto decomp = decompose(w, ModeCount::full());
  CHECK_THROWS_AS(approx_impact(w, select_modes(decomp, 0.75, 1), dist), ValidationError);

  // Dropping one member of a conjugate pair leaves an imaginary residue.
  auto broken = select_modes(decomp, 0.5, 2);
  broken.modes.pop_back();
  CHECK_THROWS_AS(approx_impact(w, broken, dist), ConjugateClosureError);

  const auto three = approx_impact(w, select_modes(decomp, 0.5, 2), dist);
  CHECK(max_abs(three.values - exact_propagator(w).values) <= 1e-12);
}

TEST_CASE("distance_factored_impact") {
  const auto g2 = two_cycle(false);
  const auto w2 = build_weight(g2, 0.5);
  const auto f2 = distance_factored_impact(w2, geodesic_distances(g2));
  CHECK(f2.values(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(f2.values(1, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  const Graph path(3, false, {{0, 1, 1.0}, {1, 2, 1.0}});
  const auto wp = build_weight(path, 0.5);
  CHECK(wp.rho() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const auto exact = exact_propagator(wp);
  const auto fp = distance_factored_impact(wp, geodesic_distances(path));
  CHECK(std::abs(fp.values(0, 2) - exact.values(0, 2)) <= 1e-10);
  for (int i = 0; i < 3; ++i) CHECK(fp.values(i, i) == doctest::Approx(exact.values(i, i)).epsilon(1e-12));
}

TEST_CASE("impact properties on random graphs") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const bool is_directed = seed % 2 == 0;
    const auto g = generate_er(35, 0.09, is_directed, seed);
    if (g.edge_count() == 0) continue;
    const auto dist = geodesic_distances(g);
    const auto base = build_weight(g, 0.5);
    Eigen::MatrixXd previous;
    for (double gamma : gamma_grid()) {
      const auto w = base.with_gamma(gamma);
      const auto exact = exact_propagator(w);
      const auto n = static_cast<Eigen::Index>(g.n());
      for (Eigen::Index i = 0; i < n; ++i) {
        CHECK(exact.values(i, i) >= 1.0);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (dist(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).finite()) {
            CHECK(exact.values(i, j) > 0.0);
          } else {
            CHECK(std::abs(exact.values(i, j)) <= 1e-14);
          }
        }
      }
      if (!is_directed) CHECK(max_abs(exact.values - exact.values.transpose()) <= 1e-8);
      if (previous.size() > 0) {
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) CHECK(exact.values(i, j) >= previous(i, j));
          }
        }
      }
      previous = exact.values;

      const auto series = series_oracle(w, series_terms_for(gamma));
      CHECK(max_abs(series.values - exact.values) <= 1e-8);
      const auto factored = distance_factored_impact(w, dist, exact);
      CHECK(max_abs(factored.values - exact.values) <= 1e-8);
    }
  }
}

TEST_CASE("first-order impact equals an independent power-iteration evaluation") {
  const auto g = largest_component(generate_er(120, 0.05, false, 31));
  const auto dist = geodesic_distances(g);
  const auto w = build_weight(g, 0.875);
  const auto approx = approx_impact(w, select_modes(decompose(w, ModeCount::top(1)), 0.875, 1), dist);

  // Perron vector of B by power iteration on B + I.
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  for (int it = 0; it < 20000; ++it) v = (w.B() * v + v).normalized();
  const double lambda = v.dot(w.B() * v);
  CHECK(lambda == doctest::Approx(1.0).epsilon(1e-10));

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto d = dist(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).value();
      const double expected = std::pow(0.875, d) / (1 - 0.875) * v(i) * v(j);
      CHECK(std::abs(approx.values(i, j) - expected) <= 1e-9 * (1 + std::abs(expected)));
    }
  }
  CHECK(max_abs(approx.values - approx.values.transpose()) <= 1e-8);
}
