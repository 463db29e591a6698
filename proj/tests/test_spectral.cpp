#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "robustnet/datagen.hpp"
#include "robustnet/graph.hpp"
#include "robustnet/rng.hpp"
#include "robustnet/spectral.hpp"

using namespace robustnet;
using doctest::Approx;

namespace {

Matrix random_symmetric(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.uniform(-2.0, 2.0);
  return a;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("laplacian has zero row sums and the degree diagonal") {
  Graph g = path_graph(4);
  Matrix l = laplacian(g);
  REQUIRE(l.rows() == 4);
  CHECK(l(0, 0) == 1.0);
  CHECK(l(1, 1) == 2.0);
  CHECK(l(0, 1) == -1.0);
  CHECK(l(0, 2) == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(l.row(i).sum() == Approx(0.0).epsilon(1e-14));
  CHECK(l == l.transpose().eval());
}

TEST_CASE("laplacian zeroes out removed nodes") {
  Graph g = path_graph(4);
  g.remove_node(1);
  Matrix l = laplacian(g);
  REQUIRE(l.rows() == 4);
  CHECK(l.row(1).cwiseAbs().sum() == 0.0);
  CHECK(l.col(1).cwiseAbs().sum() == 0.0);
  CHECK(l(0, 0) == 0.0);  // endpoint isolated by the removal
  CHECK(l(2, 2) == 1.0);
}

TEST_CASE("jacobi eigendecomposition matches the library solver") {
  Rng rng(7);
  for (int n : {1, 2, 3, 5, 8, 12}) {
    Matrix a = random_symmetric(n, rng);
    EigenDecomposition mine = eigh(a);
    Eigen::SelfAdjointEigenSolver<Matrix> ref(a);
    REQUIRE(ref.info() == Eigen::Success);
    for (int i = 0; i < n; ++i)
      CHECK(mine.eigenvalues[i] == Approx(ref.eigenvalues()[i]).epsilon(1e-9).scale(1.0));
    // Eigenvectors are orthonormal and satisfy A v = lambda v.
    Matrix gram = mine.eigenvectors.transpose() * mine.eigenvectors;
    CHECK((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    Matrix residual = a * mine.eigenvectors -
                      mine.eigenvectors * mine.eigenvalues.asDiagonal().toDenseMatrix();
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("eigh rejects non-square and asymmetric input") {
  CHECK_THROWS_AS(eigh(Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(eigh(bad), std::invalid_argument);
}

TEST_CASE("path algebraic connectivity hits the closed form") {
  // Second-smallest Laplacian eigenvalue of P_n is 2(1 - cos(pi/n)).
  Graph p4 = path_graph(4);
  EigenDecomposition d = eigh(laplacian(p4));
  CHECK(d.eigenvalues[0] == Approx(0.0).epsilon(1e-10).scale(1.0));
  CHECK(d.eigenvalues[1] == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-10));
  Graph p6 = path_graph(6);
  EigenDecomposition d6 = eigh(laplacian(p6));
  CHECK(d6.eigenvalues[1] == Approx(2.0 * (1.0 - std::cos(M_PI / 6.0))).epsilon(1e-10));
}

TEST_CASE("fiedler vector of a path is monotone along it") {
  for (int n : {3, 4, 7}) {
    Graph g = path_graph(n);
    Vector y = fiedler_vector(g);
    REQUIRE(y.size() == n);
    CHECK(std::abs(y.sum()) < 1e-9);            // orthogonal to the ones vector
    CHECK(y.norm() == Approx(1.0).epsilon(1e-9));
    bool increasing = y[1] > y[0];
    for (int i = 0; i + 1 < n; ++i)
      CHECK((increasing ? y[i + 1] > y[i] : y[i + 1] < y[i]));
  }
}

TEST_CASE("fiedler vector demands a connected graph") {
  Graph disconnected(4);
  disconnected.add_edge(NodePair::of(0, 1));
  disconnected.add_edge(NodePair::of(2, 3));
  CHECK_THROWS_AS(fiedler_vector(disconnected), std::invalid_argument);
}

TEST_CASE("pseudoinverse satisfies the defining identities") {
  Rng rng(11);
  for (int rep = 0; rep < 4; ++rep) {
    Graph g = rep % 2 == 0 ? generate_er_connected(7, 0.4, rng) : generate_ba(8, 2, rng);
    Matrix l = laplacian(g);
    Matrix lp = laplacian_pseudoinverse(g);
    CHECK((l * lp * l - l).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((lp * l * lp - lp).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((lp - lp.transpose()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((lp * Vector::Ones(l.rows())).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("triangle pseudoinverse has the closed form (3I - J) / 9") {
  Matrix lp = laplacian_pseudoinverse(complete_graph(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(lp(i, j) == Approx(((i == j ? 3.0 : 0.0) - 1.0) / 9.0)
                            .epsilon(1e-10)
                            .scale(1.0));
}

TEST_CASE("pseudoinverse rejects disconnected graphs") {
  Graph disconnected(4);
  disconnected.add_edge(NodePair::of(0, 1));
  disconnected.add_edge(NodePair::of(2, 3));
  CHECK_THROWS_AS(laplacian_pseudoinverse(disconnected), std::invalid_argument);
}

TEST_CASE("effective resistance follows the series and parallel laws") {
  // Path endpoints: n-1 unit resistors in series.
  for (int n = 2; n <= 20; ++n) {
    Matrix lp = laplacian_pseudoinverse(path_graph(n));
    CHECK(effective_resistance(lp, 0, n - 1) == Approx(n - 1.0).epsilon(1e-10));
  }
  // Cycle: 1 in parallel with n-1 in series.
  for (int n : {3, 5, 8}) {
    Matrix lp = laplacian_pseudoinverse(cycle_graph(n));
    CHECK(effective_resistance(lp, 0, 1) == Approx((n - 1.0) / n).epsilon(1e-10));
  }
  // Complete graph: every pair sits at 2/n.
  Matrix lp = laplacian_pseudoinverse(complete_graph(5));
  CHECK(effective_resistance(lp, 1, 3) == Approx(2.0 / 5.0).epsilon(1e-10));
}

TEST_CASE("resistance bounds: edges at most one, non-edges at least the contraction bound") {
  Rng rng(13);
  for (int rep = 0; rep < 3; ++rep) {
    Graph g = generate_er_connected(7, 0.4, rng);
    Matrix lp = laplacian_pseudoinverse(g);
    // An existing unit edge in parallel with the rest of the network caps
    // the resistance at 1 (Rayleigh monotonicity).
    for (NodePair e : g.edges()) CHECK(effective_resistance(lp, e.u, e.v) <= 1.0 + 1e-12);
    // Shorting every other node together can only lower the resistance of a
    // non-adjacent pair, which leaves 1/deg(u) + 1/deg(v) in series.
    for (NodePair e : g.non_edges()) {
      double bound = 1.0 / g.degree(e.u) + 1.0 / g.degree(e.v);
      CHECK(effective_resistance(lp, e.u, e.v) >= bound - 1e-12);
    }
  }
  // On sparse families every non-edge really does exceed 1.
  for (int n : {4, 6, 9}) {
    Graph g = path_graph(n);
    Matrix lp = laplacian_pseudoinverse(g);
    for (NodePair e : g.non_edges()) CHECK(effective_resistance(lp, e.u, e.v) > 1.0);
  }
  // But not in general: the two degree-3 sides of K_{2,3} sit at 2/3.
  Graph k23 = Graph::from_edges(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
  Matrix lp23 = laplacian_pseudoinverse(k23);
  CHECK(effective_resistance(lp23, 0, 1) == Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("effective resistance checks its indices") {
  Matrix lp = laplacian_pseudoinverse(path_graph(3));
  CHECK_THROWS_AS(effective_resistance(lp, 0, 3), std::out_of_range);
  CHECK_THROWS_AS(effective_resistance(Matrix::Zero(2, 3), 0, 1), std::invalid_argument);
}

}  // TEST_SUITE
