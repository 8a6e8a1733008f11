#include <Eigen/Dense>
#include <map>
#include <random>

#include "doctest.h"
#include "dgff/harmonic.hpp"

using namespace dgff;

namespace {

DomainPtr single_vertex() { return build_domain(triangular_lattice(), Rhombus{2, 2}); }
// Interior (1,1) and (2,1); all their other neighbors are boundary.
DomainPtr two_vertices() { return build_domain(triangular_lattice(), Rhombus{3, 2}); }

VertexId at(const GridDomain& d, int i, int j) { return *d.find(LatticeSite{i, j, 0}); }

Field boundary_fn(const DomainPtr& d, auto fn) {
  Field f(d);
  for (VertexId v : d->boundary()) f[v] = fn(d->position(v));
  return f;
}

}  // namespace

TEST_CASE("constant boundary gives a constant extension") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{7, 5});
  const LaplacianSystem sys(d);
  const Field h = harmonic_extension(sys, boundary_fn(d, [](Complex) { return 2.5; }));
  for (double x : h.values) CHECK(x == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("one interior vertex takes the mean of its neighbors") {
  const DomainPtr d = single_vertex();
  const LaplacianSystem sys(d);
  const VertexId v = d->interior()[0];
  Field b(d, 0.0);
  b[d->neighbors(v)[0].vertex] = 1.0;
  CHECK(harmonic_extension(sys, b)[v] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("affine boundary data extend affinely") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{9, 6});
  const Field h = harmonic_extension(LaplacianSystem(d), boundary_fn(d, [](Complex z) { return z.real(); }));
  for (VertexId v : d->interior()) CHECK(std::abs(h[v] - d->position(v).real()) < 1e-11);
}

TEST_CASE("maximum principle and linearity") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{8, 8});
  const LaplacianSystem sys(d);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Field f(d), g(d);
  for (VertexId v : d->boundary()) {
    f[v] = normal(rng);
    g[v] = normal(rng);
  }
  const Field hf = harmonic_extension(sys, f), hg = harmonic_extension(sys, g);
  Field s(d);
  for (VertexId v : d->boundary()) s[v] = 2.0 * f[v] - g[v];
  const Field hs = harmonic_extension(sys, s);
  double lo = 1e9, hi = -1e9;
  for (VertexId v : d->boundary()) lo = std::min(lo, f[v]), hi = std::max(hi, f[v]);
  for (VertexId v : d->interior()) {
    CHECK(hf[v] >= lo);
    CHECK(hf[v] <= hi);
    CHECK(std::abs(hs[v] - (2.0 * hf[v] - hg[v])) < 1e-12);
  }
  const Field lap = laplacian(hf);
  for (VertexId v : d->interior()) CHECK(std::abs(lap[v]) < 1e-11);
}

TEST_CASE("missing boundary data is rejected") {
  const DomainPtr d = single_vertex();
  CHECK_THROWS_AS(harmonic_extension(LaplacianSystem(d), Field(d)), std::invalid_argument);
}

TEST_CASE("precision matrix of TG has 6 on the diagonal") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{5, 5});
  const LaplacianSystem sys(d);
  const Eigen::MatrixXd P(sys.precision());
  CHECK((P - P.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < P.rows(); ++i) CHECK(P(i, i) == 6.0);
  CHECK(P.llt().info() == Eigen::Success);
}

TEST_CASE("Green function closed forms") {
  {
    const DomainPtr d = single_vertex();
    const LaplacianSystem sys(d);
    const VertexId u = d->interior()[0];
    CHECK(green_function(sys, u)[u] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(green_function(sys, d->boundary()[0]), std::invalid_argument);
  }
  const DomainPtr d = two_vertices();
  REQUIRE(d->interior().size() == 2);
  const LaplacianSystem sys(d);
  const VertexId u = at(*d, 1, 1), v = at(*d, 2, 1);
  const Field G = green_function(sys, u);
  CHECK(G[u] == doctest::Approx(36.0 / 35.0).epsilon(1e-14));
  CHECK(G[v] == doctest::Approx(6.0 / 35.0).epsilon(1e-14));
  // returns to u happen with probability 1/36 per excursion
  double series = 0.0, p = 1.0;
  for (int k = 0; k < 40; ++k, p /= 36.0) series += p;
  CHECK(G[u] == doctest::Approx(series).epsilon(1e-14));
  for (double x : G.values) CHECK(x >= 0.0);
}

TEST_CASE("Green function against a path-counting oracle") {
  // three interior vertices in a row
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{4, 2});
  REQUIRE(d->interior().size() == 3);
  const LaplacianSystem sys(d);
  const auto F = sys.free_vertices();
  const auto n = static_cast<Eigen::Index>(F.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (const auto& nb : d->neighbors(F[static_cast<std::size_t>(i)]))
      if (sys.is_free(nb.vertex)) P(i, sys.free_index(nb.vertex)) += nb.weight / 6.0;
  // sum over walk lengths of P^k
  Eigen::MatrixXd G = Eigen::MatrixXd::Identity(n, n), term = G;
  for (int k = 0; k < 200; ++k) {
    term = term * P;
    G += term;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Field g = green_function(sys, F[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < n; ++j) CHECK(std::abs(g[F[static_cast<std::size_t>(j)]] - G(i, j)) < 1e-13);
  }
}

TEST_CASE("Green function symmetry in the weighted sense") {
  const DomainPtr d = build_domain(lattice_by_name("square-ne"), Rhombus{6, 5});
  const LaplacianSystem sys(d);
  const auto F = sys.free_vertices();
  for (std::size_t i = 0; i < F.size(); i += 3) {
    const Field gi = green_function(sys, F[i]);
    for (std::size_t j = 0; j < F.size(); j += 2) {
      const Field gj = green_function(sys, F[j]);
      CHECK(std::abs(gi[F[j]] / d->conductance(F[j]) - gj[F[i]] / d->conductance(F[i])) < 1e-12);
    }
  }
}

TEST_CASE("gradient/Laplacian duality and orthogonality") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{10, 7});
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  Field f(d, 0.0), g(d, 0.0);
  for (VertexId v : d->interior()) {
    f[v] = normal(rng);
    g[v] = normal(rng);
  }
  const Field lf = laplacian(f);
  double dot = 0.0, nf = 0.0, ng = 0.0;
  for (std::size_t v = 0; v < f.size(); ++v) {
    dot += lf.values[v] * g.values[v];
    nf += f.values[v] * f.values[v];
    ng += g.values[v] * g.values[v];
  }
  CHECK(std::abs(gradient_inner(f, g) + dot) < 1e-10 * std::sqrt(nf * ng));

  Field b(d);
  for (VertexId v : d->boundary()) b[v] = normal(rng);
  const Field h = harmonic_extension(LaplacianSystem(d), b);
  double nh = 0.0;
  for (double x : h.values) nh += x * x;
  CHECK(std::abs(gradient_inner(f, h)) < 1e-10 * std::sqrt(nf * nh));
}

TEST_CASE("harmonic measure") {
  const DomainPtr d = single_vertex();
  const LaplacianSystem sys(d);
  const VertexId v = d->interior()[0];
  std::vector<VertexId> nbs;
  for (const auto& nb : d->neighbors(v)) nbs.push_back(nb.vertex);
  for (double p : harmonic_measure(sys, v, nbs)) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(harmonic_measure(sys, v, std::vector<VertexId>{}), std::invalid_argument);
  CHECK_THROWS_AS(harmonic_measure(sys, nbs[0], nbs), std::invalid_argument);
}

TEST_CASE("harmonic measure of the boundary agrees with simulated walks") {
  const DomainPtr d = two_vertices();
  const LaplacianSystem sys(d);
  const VertexId u = at(*d, 1, 1);
  const std::vector<VertexId> targets(d->boundary().begin(), d->boundary().end());
  const auto hm = harmonic_measure(sys, u, targets);
  double total = 0.0;
  for (double p : hm) {
    CHECK(p >= 0.0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // boundary neighbors of u only: (1/6) * G(u,u); neighbors shared with v get (1/6)(G(u,u) + G(u,v))
  std::map<VertexId, int> pos;
  for (std::size_t q = 0; q < targets.size(); ++q) pos[targets[q]] = static_cast<int>(q);

  Rng rng(17);
  const std::size_t N = 1000000;
  std::vector<double> hits(targets.size(), 0.0);
  for (std::size_t k = 0; k < N; ++k) hits[static_cast<std::size_t>(pos[random_walk(sys, u, targets, rng).hit])] += 1.0;
  for (std::size_t q = 0; q < targets.size(); ++q) {
    const double p = hm[q], phat = hits[q] / static_cast<double>(N);
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(N));
    CHECK(std::abs(phat - p) <= 3.0 * se);
  }
}

TEST_CASE("random walk") {
  const DomainPtr d = build_domain(lattice_by_name("square-ne"), Rhombus{6, 6});
  const LaplacianSystem sys(d);
  const std::vector<VertexId> absorbing(d->boundary().begin(), d->boundary().end());
  Rng rng(5);
  const VertexId start = d->interior()[d->interior().size() / 2];
  // zero-weight diagonals are never used
  for (int rep = 0; rep < 2000; ++rep) {
    const WalkResult w = random_walk(sys, start, absorbing, rng);
    CHECK(w.path.front() == start);
    CHECK(d->is_boundary(w.hit));
    for (std::size_t k = 1; k < w.path.size(); ++k) {
      const auto e = d->find_edge(w.path[k - 1], w.path[k]);
      REQUIRE(e.has_value());
      CHECK(d->edge(*e).weight > 0.0);
    }
  }

  const DomainPtr one = single_vertex();
  const LaplacianSystem s1(one);
  const std::vector<VertexId> all(one->boundary().begin(), one->boundary().end());
  CHECK(random_walk(s1, one->interior()[0], all, rng).path.size() == 2);
  CHECK_THROWS_AS(random_walk(s1, all[0], all, rng), std::invalid_argument);
}

TEST_CASE("random-walk exit distribution matches harmonic measure") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{4, 4});
  const LaplacianSystem sys(d);
  const std::vector<VertexId> targets(d->boundary().begin(), d->boundary().end());
  const VertexId start = d->interior()[0];
  const auto hm = harmonic_measure(sys, start, targets);
  std::map<VertexId, std::size_t> pos;
  for (std::size_t q = 0; q < targets.size(); ++q) pos[targets[q]] = q;
  Rng rng(99);
  const std::size_t N = 100000;
  std::vector<double> hits(targets.size(), 0.0);
  for (std::size_t k = 0; k < N; ++k) hits[pos[random_walk(sys, start, targets, rng).hit]] += 1.0;
  for (std::size_t q = 0; q < targets.size(); ++q) {
    const double se = std::sqrt(std::max(hm[q] * (1.0 - hm[q]), 1e-12) / static_cast<double>(N));
    CHECK(std::abs(hits[q] / static_cast<double>(N) - hm[q]) <= 4.0 * se);
  }
}
