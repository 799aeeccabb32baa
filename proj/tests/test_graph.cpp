#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <set>
#include <unsupported/Eigen/KroneckerProduct>

#include "dwb/graph.hpp"
#include "dwb/rng.hpp"

using namespace dwb;

namespace {

std::set<std::pair<int, int>> edge_set(const Topology& t) {
  return {t.edges.begin(), t.edges.end()};
}

}  // namespace

TEST_CASE("standard families produce the expected edge sets") {
  CHECK(edge_set(build_topology(TopologyKind::complete, 3)) ==
        std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(edge_set(build_topology(TopologyKind::star, 4)) ==
        std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}});
  CHECK(edge_set(build_topology(TopologyKind::cycle, 4)) ==
        std::set<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

TEST_CASE("topology construction rejects invalid inputs") {
  CHECK_THROWS_AS(build_topology(TopologyKind::complete, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_topology(3, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_topology(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_topology(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(make_topology(4, {{0, 1}, {2, 3}}), std::invalid_argument);  // disconnected
  CHECK(make_topology(1, {}).m == 1);  // single node, trivially connected
}

TEST_CASE("laplacian entries match the known small cases") {
  Eigen::MatrixXd k2(2, 2);
  k2 << 1, -1, -1, 1;
  CHECK(laplacian(build_topology(TopologyKind::complete, 2)).entries == k2);

  Eigen::MatrixXd star3(3, 3);
  star3 << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  CHECK(laplacian(build_topology(TopologyKind::star, 3)).entries == star3);

  Eigen::MatrixXd c3(3, 3);
  c3 << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  CHECK(laplacian(build_topology(TopologyKind::cycle, 3)).entries == c3);
}

TEST_CASE("laplacian rows sum to zero exactly for every family") {
  for (auto kind : {TopologyKind::complete, TopologyKind::cycle, TopologyKind::star,
                    TopologyKind::erdos_renyi}) {
    for (int m : {2, 3, 7, 20}) {
      const Laplacian lap = laplacian(build_topology(kind, m, 0.0, 13));
      const Eigen::VectorXd row_sums = lap.entries * Eigen::VectorXd::Ones(m);
      CHECK(row_sums.lpNorm<Eigen::Infinity>() == 0.0);
      CHECK(lap.entries == lap.entries.transpose().eval());
    }
  }
}

TEST_CASE("lambda_max on families with known spectra") {
  for (int m : {2, 3, 5, 10, 50}) {
    CHECK(lambda_max(laplacian(build_topology(TopologyKind::complete, m))) ==
          doctest::Approx(m).epsilon(1e-10));
    CHECK(lambda_max(laplacian(build_topology(TopologyKind::star, m))) ==
          doctest::Approx(m).epsilon(1e-10));
  }
  // Cycle eigenvalues are 2 - 2 cos(2 pi k / m); even m peaks at exactly 4.
  CHECK(lambda_max(laplacian(build_topology(TopologyKind::cycle, 4))) ==
        doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("power iteration agrees with the dense solver") {
  for (int m : {5, 17, 60, 100}) {
    const Laplacian lap =
        laplacian(build_topology(TopologyKind::erdos_renyi, m, 0.0, 101 + m));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(lap.entries,
                                                         Eigen::EigenvaluesOnly);
    const double reference = dense.eigenvalues().maxCoeff();
    CHECK(lambda_max_power(lap.entries) == doctest::Approx(reference).epsilon(1e-8));
    CHECK(lambda_max(lap) == doctest::Approx(reference).epsilon(1e-8));
  }
}

TEST_CASE("consensus norm on hand-checked stacks") {
  const Laplacian edge = laplacian(build_topology(TopologyKind::complete, 2));
  Eigen::VectorXd p(4);
  p << 1, 0, 0, 1;
  CHECK(consensus_norm(edge, p) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const Laplacian k3 = laplacian(build_topology(TopologyKind::complete, 3));
  Eigen::VectorXd corners(9);
  corners << 1, 0, 0, 0, 1, 0, 0, 0, 1;
  CHECK(consensus_norm(k3, corners) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));

  Eigen::VectorXd equal(9);
  equal << .2, .3, .5, .2, .3, .5, .2, .3, .5;
  CHECK(consensus_norm(k3, equal) == 0.0);

  CHECK_THROWS_AS(consensus_norm(k3, Eigen::VectorXd::Zero(8)), std::invalid_argument);
}

TEST_CASE("consensus norm squared equals the Kronecker quadratic form") {
  RngStream rng = rng_stream(2024, 0, 0);
  for (int m : {2, 4, 9}) {
    const Topology t = build_topology(TopologyKind::erdos_renyi, m, 0.7, 55 + m);
    const Laplacian lap = laplacian(t);
    const int n = 6;
    Eigen::VectorXd p(m * n);
    for (int i = 0; i < p.size(); ++i) p[i] = rng.next_double() * 2.0 - 1.0;
    // Independent route: materialize W = Wbar ⊗ I_n and evaluate p^T W p.
    const Eigen::MatrixXd W =
        Eigen::kroneckerProduct(lap.entries, Eigen::MatrixXd::Identity(n, n));
    const double quad = p.dot(W * p);
    const double direct = consensus_norm(lap, p);
    CHECK(direct * direct == doctest::Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("neighbor queries") {
  const Topology star = build_topology(TopologyKind::star, 4);
  CHECK(neighbors(star, 0) == std::vector<int>{1, 2, 3});
  CHECK(neighbors(star, 2) == std::vector<int>{0});
  const Topology cycle = build_topology(TopologyKind::cycle, 5);
  CHECK(neighbors(cycle, 0) == std::vector<int>{1, 4});
  CHECK_THROWS_AS(neighbors(star, 4), std::invalid_argument);
  CHECK_THROWS_AS(neighbors(star, -1), std::invalid_argument);
}

TEST_CASE("erdos-renyi graphs are reproducible and connected") {
  const Topology a = build_topology(TopologyKind::erdos_renyi, 25, 0.2, 42);
  const Topology b = build_topology(TopologyKind::erdos_renyi, 25, 0.2, 42);
  CHECK(a.edges == b.edges);
  const Topology c = build_topology(TopologyKind::erdos_renyi, 25, 0.2, 43);
  CHECK(a.edges != c.edges);
  CHECK_THROWS(build_topology(TopologyKind::erdos_renyi, 10, -0.5, 1));
}

TEST_CASE("edge-list text round trip") {
  const Topology t = build_topology(TopologyKind::erdos_renyi, 12, 0.4, 7);
  const Topology back = parse_edge_list(to_edge_list(t));
  CHECK(back.m == t.m);
  CHECK(back.edges == t.edges);
  CHECK(to_edge_list(build_topology(TopologyKind::complete, 2)) == "2\n0 1\n");
}
