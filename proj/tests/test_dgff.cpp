#include <Eigen/Dense>
#include <algorithm>
#include <set>

#include "doctest.h"
#include "dgff/gaussian.hpp"
#include "dgff/stats.hpp"

using namespace dgff;

namespace {

// Dense precision on the interior, built from the edge list.
Eigen::MatrixXd dense_precision(const GridDomain& d, const std::vector<VertexId>& F) {
  const auto n = static_cast<Eigen::Index>(F.size());
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  auto pos = [&](VertexId v) -> Eigen::Index {
    const auto it = std::find(F.begin(), F.end(), v);
    return it == F.end() ? -1 : it - F.begin();
  };
  for (const auto& e : d.edges()) {
    const Eigen::Index i = pos(e.u), j = pos(e.v);
    if (i >= 0) Q(i, i) += e.weight;
    if (j >= 0) Q(j, j) += e.weight;
    if (i >= 0 && j >= 0) {
      Q(i, j) -= e.weight;
      Q(j, i) -= e.weight;
    }
  }
  return Q;
}

}  // namespace

TEST_CASE("single interior site has variance 1/6") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{2, 2});
  const GaussianModel m(d, boundary_field(d, 0.0, 0.0));
  const VertexId v = d->interior()[0];
  CHECK(m.covariance(v, v) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(kSingleSiteSdTG * kSingleSiteSdTG == doctest::Approx(m.covariance(v, v)).epsilon(1e-14));
  CHECK(m.covariance(v, d->boundary()[0]) == 0.0);
}

TEST_CASE("two interior sites: covariance 1/35, variance 6/35") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{3, 2});
  const GaussianModel m(d, boundary_field(d, 0.0, 0.0));
  const VertexId u = d->interior()[0], v = d->interior()[1];
  CHECK(m.covariance(u, v) == doctest::Approx(1.0 / 35.0).epsilon(1e-13));
  CHECK(m.covariance(u, u) == doctest::Approx(6.0 / 35.0).epsilon(1e-13));
  const std::vector<VertexId> F(d->interior().begin(), d->interior().end());
  const Eigen::MatrixXd C = dense_precision(*d, F).inverse();
  CHECK(std::abs(C(0, 1) - 1.0 / 35.0) < 1e-14);
  CHECK(std::abs(C(0, 0) - 6.0 / 35.0) < 1e-14);
}

TEST_CASE("covariance matrix against a dense inverse") {
  const DomainPtr d = build_domain(lattice_by_name("square-ne"), Rhombus{5, 7});
  const GaussianModel m(d, boundary_field(d, 1.0, 2.0));
  const auto F = m.system().free_vertices();
  const Eigen::MatrixXd C = dense_precision(*d, {F.begin(), F.end()}).inverse();
  CHECK((m.covariance_matrix() - C).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pinning all neighbors of a site") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{5, 5});
  const GaussianModel m(d, boundary_field(d, 0.0, 0.0));
  const VertexId v = *d->find(LatticeSite{2, 2, 0});
  std::vector<VertexId> pinned;
  Field values(d);
  double y = 0.0;
  for (std::size_t u = 0; u < d->vertex_count(); ++u) {
    const auto id = static_cast<VertexId>(u);
    if (id == v) continue;
    pinned.push_back(id);
    values[id] = d->is_boundary(id) ? 0.0 : 0.1 * static_cast<double>(u % 7) - 0.2;
  }
  for (const auto& nb : d->neighbors(v)) y += values[nb.vertex];
  const GaussianModel c = conditional_model(m, pinned, values);
  CHECK(c.mean()[v] == doctest::Approx(y / 6.0).epsilon(1e-13));
  CHECK(c.covariance(v, v) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("pinning only the boundary leaves the model unchanged") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{6, 4});
  const GaussianModel m(d, boundary_field(d, 0.4, 0.7));
  const GaussianModel c = conditional_model(m, d->boundary(), m.pinned_values());
  for (VertexId v : d->interior()) CHECK(std::abs(c.mean()[v] - m.mean()[v]) < 1e-13);
  CHECK((c.covariance_matrix() - m.covariance_matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("conditional model rejects a pin set missing the boundary") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{4, 4});
  const GaussianModel m(d, boundary_field(d, 0.0, 0.0));
  const std::vector<VertexId> some(d->interior().begin(), d->interior().end());
  CHECK_THROWS_AS(conditional_model(m, some, Field(d, 0.0)), std::invalid_argument);
}

TEST_CASE("constant boundary gives a constant mean") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{7, 7});
  const double lam = kLambdaTG;
  const GaussianModel m(d, boundary_field(d, -lam, lam));
  for (double x : m.mean().values) CHECK(x == doctest::Approx(lam).epsilon(1e-12));
}

TEST_CASE("samples are reproducible and respect the boundary") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{10, 10});
  const GaussianModel m(d, boundary_field(d, kLambdaTG, kLambdaTG));
  Rng r1(4), r2(4);
  const Field a = m.sample(r1), b = m.sample(r2);
  CHECK(a.values == b.values);
  for (VertexId v : d->boundary()) CHECK(a[v] == (d->arc(v) == Arc::plus ? kLambdaTG : -kLambdaTG));
}

TEST_CASE("Dirichlet energy") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{6, 5});
  SUBCASE("constant field") {
    const DirichletEnergy e = dirichlet_energy(Field(d, 3.0));
    CHECK(e.discrete == 0.0);
    REQUIRE(e.affine_continuum);
    CHECK(*e.affine_continuum == 0.0);
  }
  SUBCASE("linear field") {
    Field f(d);
    for (std::size_t v = 0; v < f.size(); ++v) f.values[v] = d->position(static_cast<VertexId>(v)).real();
    const double area = static_cast<double>(d->faces().size()) * std::sqrt(3.0) / 4.0;
    CHECK(*dirichlet_energy(f).affine_continuum / area == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("edge identity on random fields") {
    Rng rng(11);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 20; ++rep) {
      Field f(d);
      for (double& x : f.values) x = normal(rng);
      const DirichletEnergy e = dirichlet_energy(f);
      CHECK(e.discrete == doctest::Approx(e.interior_edge_sum + e.boundary_edge_sum).epsilon(1e-13));
      CHECK(*e.affine_continuum ==
            doctest::Approx((e.interior_edge_sum + 0.5 * e.boundary_edge_sum) / std::sqrt(3.0)).epsilon(1e-12));
    }
  }
  SUBCASE("no continuum value off the triangular grid") {
    const DomainPtr s = build_domain(lattice_by_name("square-ne"), Rhombus{4, 4});
    CHECK_FALSE(dirichlet_energy(Field(s, 1.0)).affine_continuum.has_value());
  }
}

TEST_CASE("conditional mean given an interface is harmonic off the pinned set") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{12, 12});
  const GaussianModel m(d, boundary_field(d, kLambdaTG, kLambdaTG));
  Rng rng(21);
  const Field h = m.sample(rng);
  const InterfacePath g = extract_interface(h);
  const Field c = conditional_mean_given_interface(g, h);
  std::set<VertexId> pinned(d->boundary().begin(), d->boundary().end());
  pinned.insert(g.right_vertices.begin(), g.right_vertices.end());
  pinned.insert(g.left_vertices.begin(), g.left_vertices.end());
  for (VertexId v : pinned) CHECK(c[v] == h[v]);
  const Field lap = laplacian(c);
  for (VertexId v : d->interior())
    if (!pinned.count(v)) CHECK(std::abs(lap[v]) < 1e-11);
}

TEST_CASE("Markov property: conditional sampler against a direct construction") {
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{6, 6});
  const GaussianModel m(d, boundary_field(d, 0.5, 0.5));
  // free set: a 2x2 block of cells in the middle
  std::vector<VertexId> U, pinned;
  for (std::size_t v = 0; v < d->vertex_count(); ++v) {
    const auto id = static_cast<VertexId>(v);
    const auto s = d->site(id);
    if (s.i >= 2 && s.i <= 3 && s.j >= 2 && s.j <= 3)
      U.push_back(id);
    else
      pinned.push_back(id);
  }
  Rng rng(2024);
  const Field outside = m.sample(rng);
  const GaussianModel c = conditional_model(m, pinned, outside);

  const LaplacianSystem sys(d, U);
  const Field mu = harmonic_extension(sys, outside);
  std::normal_distribution<double> normal;
  const int N = 1000;
  std::vector<std::vector<double>> xs, ys;
  for (int k = 0; k < N; ++k) {
    const Field a = c.sample(rng);
    Eigen::VectorXd z(static_cast<Eigen::Index>(U.size()));
    for (auto& x : z) x = normal(rng);
    const Eigen::VectorXd e = sys.correlate(z);
    std::vector<double> xa, xb;
    for (VertexId v : U) {
      xa.push_back(a[v]);
      xb.push_back(mu[v] + e(sys.free_index(v)));
    }
    xs.push_back(std::move(xa));
    ys.push_back(std::move(xb));
  }
  CHECK(energy_distance_test(xs, ys, 199, rng) > 0.01);
  for (VertexId v : U) CHECK(std::abs(c.mean()[v] - mu[v]) < 1e-12);
}
