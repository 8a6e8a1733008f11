#include "dgff/gaussian.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace dgff {

GaussianModel::GaussianModel(DomainPtr domain, const Field& boundary_values)
    : sys_(std::make_shared<LaplacianSystem>(domain)), pinned_(domain) {
  if (boundary_values.size() != domain->vertex_count()) throw std::invalid_argument("field does not match the domain");
  for (VertexId v : domain->boundary()) pinned_[v] = boundary_values[v];
  mean_ = harmonic_extension(*sys_, pinned_);
}

GaussianModel::GaussianModel(std::shared_ptr<const LaplacianSystem> sys, Field mean, Field pinned)
    : sys_(std::move(sys)), mean_(std::move(mean)), pinned_(std::move(pinned)) {}

Field GaussianModel::sample(Rng& rng) const {
  Field out = mean_;
  if (sys_->size() == 0) return out;
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(static_cast<Eigen::Index>(sys_->size()));
  for (Eigen::Index q = 0; q < z.size(); ++q) z[q] = normal(rng);
  const Eigen::VectorXd x = sys_->correlate(z);
  const auto fv = sys_->free_vertices();
  for (std::size_t q = 0; q < fv.size(); ++q) out[fv[q]] += x[static_cast<Eigen::Index>(q)];
  return out;
}

double GaussianModel::covariance(VertexId u, VertexId v) const {
  const int iu = sys_->free_index(u), iv = sys_->free_index(v);
  if (iu < 0 || iv < 0) return 0.0;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys_->size()));
  e[iv] = 1.0;
  return sys_->solve(e)[iu];
}

Eigen::MatrixXd GaussianModel::covariance_matrix() const {
  const auto n = static_cast<Eigen::Index>(sys_->size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[j] = 1.0;
    out.col(j) = sys_->solve(e);
  }
  return out;
}

Field boundary_field(const DomainPtr& domain, double a, double b) {
  Field f(domain);
  for (VertexId v : domain->boundary()) f[v] = domain->arc(v) == Arc::plus ? b : -a;
  return f;
}

GaussianModel conditional_model(const GaussianModel& model, std::span<const VertexId> pinned, const Field& values) {
  const GridDomain& d = model.domain();
  const LaplacianSystem& old = model.system();
  std::vector<char> in_set(d.vertex_count(), 0);
  for (VertexId v : pinned) {
    if (v < 0 || static_cast<std::size_t>(v) >= d.vertex_count()) throw std::invalid_argument("pinned vertex out of range");
    in_set[static_cast<std::size_t>(v)] = 1;
  }
  for (std::size_t v = 0; v < d.vertex_count(); ++v)
    if (!old.is_free(static_cast<VertexId>(v)) && !in_set[v])
      throw std::invalid_argument("pinned set must contain every vertex pinned in the model");

  std::vector<VertexId> free;
  Field new_pinned = model.pinned_values();
  for (VertexId v : old.free_vertices()) {
    if (!in_set[static_cast<std::size_t>(v)]) {
      free.push_back(v);
    } else {
      if (!std::isfinite(values[v])) throw std::invalid_argument("missing pinned value at vertex " + std::to_string(v));
      new_pinned[v] = values[v];
    }
  }
  auto sys = std::make_shared<LaplacianSystem>(model.domain_ptr(), free);
  const Field& mu = model.mean();
  Field mean = new_pinned;
  // -Q_FP (x_P - mu_P) = sum over newly pinned neighbors of w (x_p - mu_p)
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free.size()));
  for (std::size_t q = 0; q < free.size(); ++q)
    for (const auto& nb : d.neighbors(free[q]))
      if (old.is_free(nb.vertex) && !sys->is_free(nb.vertex) && nb.weight != 0.0)
        rhs[static_cast<Eigen::Index>(q)] += nb.weight * (new_pinned[nb.vertex] - mu[nb.vertex]);
  const Eigen::VectorXd shift = sys->solve(rhs);
  for (std::size_t q = 0; q < free.size(); ++q) mean[free[q]] = mu[free[q]] + shift[static_cast<Eigen::Index>(q)];
  return GaussianModel(std::move(sys), std::move(mean), std::move(new_pinned));
}

DirichletEnergy dirichlet_energy(const Field& f) {
  const GridDomain& d = *f.domain;
  DirichletEnergy out;
  for (const auto& e : d.edges()) {
    const double diff2 = (f[e.v] - f[e.u]) * (f[e.v] - f[e.u]);
    out.discrete += e.weight * diff2;
    (e.on_boundary() ? out.boundary_edge_sum : out.interior_edge_sum) += diff2;
  }
  if (d.is_triangular_grid()) {
    double total = 0.0;
    for (const auto& t : d.faces()) {
      const Complex p0 = d.position(t[0]);
      const Complex e1 = d.position(t[1]) - p0, e2 = d.position(t[2]) - p0;
      const double d1 = f[t[1]] - f[t[0]], d2 = f[t[2]] - f[t[0]];
      // grad . e1 = d1, grad . e2 = d2
      const double det = e1.real() * e2.imag() - e1.imag() * e2.real();
      const double gx = (d1 * e2.imag() - d2 * e1.imag()) / det;
      const double gy = (e1.real() * d2 - e2.real() * d1) / det;
      total += 0.5 * std::abs(det) * (gx * gx + gy * gy);
    }
    out.affine_continuum = total;
  }
  return out;
}

Field conditional_mean_given_interface(const InterfacePath& gamma, const Field& values) {
  const DomainPtr& dp = gamma.domain;
  const GridDomain& d = *dp;
  std::vector<char> pinned(d.vertex_count(), 0);
  for (VertexId v : d.boundary()) pinned[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : gamma.right_vertices) pinned[static_cast<std::size_t>(v)] = 1;
  for (VertexId v : gamma.left_vertices) pinned[static_cast<std::size_t>(v)] = 1;
  Field data(dp);
  std::vector<VertexId> free;
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    if (!pinned[v]) {
      free.push_back(static_cast<VertexId>(v));
    } else {
      if (!std::isfinite(values.values[v]))
        throw std::invalid_argument("no value given for interface-adjacent vertex " + std::to_string(v));
      data.values[v] = values.values[v];
    }
  }
  return harmonic_extension(LaplacianSystem(dp, std::move(free)), data);
}

}  // namespace dgff
