#include "dgff/harmonic.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace dgff {

namespace {

std::vector<VertexId> interior_of(const GridDomain& d) { return {d.interior().begin(), d.interior().end()}; }

}  // namespace

LaplacianSystem::LaplacianSystem(DomainPtr domain) : LaplacianSystem(domain, interior_of(*domain)) {}

LaplacianSystem::LaplacianSystem(DomainPtr domain, std::vector<VertexId> free_vertices)
    : domain_(std::move(domain)), free_(std::move(free_vertices)) {
  std::sort(free_.begin(), free_.end());
  free_.erase(std::unique(free_.begin(), free_.end()), free_.end());
  index_.assign(domain_->vertex_count(), -1);
  for (std::size_t q = 0; q < free_.size(); ++q) {
    const VertexId v = free_[q];
    if (v < 0 || static_cast<std::size_t>(v) >= domain_->vertex_count())
      throw std::invalid_argument("free vertex id out of range");
    index_[static_cast<std::size_t>(v)] = static_cast<int>(q);
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t q = 0; q < free_.size(); ++q) {
    const VertexId v = free_[q];
    trip.emplace_back(static_cast<int>(q), static_cast<int>(q), domain_->conductance(v));
    for (const auto& n : domain_->neighbors(v)) {
      const int j = index_[static_cast<std::size_t>(n.vertex)];
      if (j >= 0 && n.weight != 0.0) trip.emplace_back(static_cast<int>(q), j, -n.weight);
    }
  }
  const auto n = static_cast<Eigen::Index>(free_.size());
  precision_.resize(n, n);
  precision_.setFromTriplets(trip.begin(), trip.end());
  precision_.makeCompressed();
  factorize();
}

void LaplacianSystem::factorize() {
  llt_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>>();
  if (free_.empty()) return;
  llt_->compute(precision_);
  if (llt_->info() != Eigen::Success)
    throw NumericalError("Laplacian is singular: some free vertex is not connected to a pinned vertex");
}

Eigen::VectorXd LaplacianSystem::solve(const Eigen::VectorXd& rhs) const {
  if (free_.empty()) return {};
  Eigen::VectorXd x = llt_->solve(rhs);
  const double tol = 1e-12 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd r = rhs - precision_ * x;
    if (!std::isfinite(r.lpNorm<Eigen::Infinity>())) throw NumericalError("non-finite solution");
    if (r.lpNorm<Eigen::Infinity>() <= tol) break;
    if (iter == 8) throw NumericalError("iterative refinement did not reach the residual tolerance");
    x += llt_->solve(r);
  }
  return x;
}

Eigen::VectorXd LaplacianSystem::correlate(const Eigen::VectorXd& z) const {
  if (free_.empty()) return {};
  // precision = P^T L L^T P, so P^T L^{-T} z has covariance precision^{-1}.
  const Eigen::VectorXd y = llt_->matrixU().solve(z);
  return llt_->permutationPinv() * y;
}

Eigen::VectorXd LaplacianSystem::pinned_rhs(const Field& pinned) const {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(free_.size()));
  for (std::size_t q = 0; q < free_.size(); ++q)
    for (const auto& n : domain_->neighbors(free_[q])) {
      if (index_[static_cast<std::size_t>(n.vertex)] >= 0 || n.weight == 0.0) continue;
      const double val = pinned[n.vertex];
      if (!std::isfinite(val))
        throw std::invalid_argument("missing pinned value at vertex " + std::to_string(n.vertex));
      rhs[static_cast<Eigen::Index>(q)] += n.weight * val;
    }
  return rhs;
}

Field harmonic_extension(const LaplacianSystem& sys, const Field& boundary_values) {
  if (boundary_values.size() != sys.domain().vertex_count())
    throw std::invalid_argument("field does not match the domain");
  Field out(sys.domain_ptr());
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (sys.is_free(static_cast<VertexId>(v))) continue;
    if (!std::isfinite(boundary_values.values[v]))
      throw std::invalid_argument("boundary value missing at vertex " + std::to_string(v));
    out.values[v] = boundary_values.values[v];
  }
  const Eigen::VectorXd x = sys.solve(sys.pinned_rhs(boundary_values));
  for (std::size_t q = 0; q < sys.size(); ++q) out[sys.free_vertices()[q]] = x[static_cast<Eigen::Index>(q)];
  return out;
}

Field green_function(const LaplacianSystem& sys, VertexId u) {
  if (u < 0 || static_cast<std::size_t>(u) >= sys.domain().vertex_count() || !sys.is_free(u))
    throw std::invalid_argument("Green function source must be a free (interior) vertex");
  const GridDomain& d = sys.domain();
  const auto n = static_cast<Eigen::Index>(sys.size());
  // Expected visits g solve g = e_u + P^T g on the free vertices.
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t q = 0; q < sys.size(); ++q) {
    const VertexId x = sys.free_vertices()[q];
    trip.emplace_back(static_cast<int>(q), static_cast<int>(q), 1.0);
    const double pi = d.conductance(x);
    for (const auto& nb : d.neighbors(x)) {
      const int j = sys.free_index(nb.vertex);
      if (j >= 0 && nb.weight != 0.0) trip.emplace_back(j, static_cast<int>(q), -nb.weight / pi);
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericalError("walk transition system is singular");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[sys.free_index(u)] = 1.0;
  const Eigen::VectorXd g = lu.solve(e);
  Field out(sys.domain_ptr(), 0.0);
  for (std::size_t q = 0; q < sys.size(); ++q) out[sys.free_vertices()[q]] = g[static_cast<Eigen::Index>(q)];
  return out;
}

std::vector<double> harmonic_measure(const LaplacianSystem& sys, VertexId v, std::span<const VertexId> targets) {
  const GridDomain& d = sys.domain();
  if (targets.empty()) throw std::invalid_argument("target set is empty");
  std::vector<int> target_pos(d.vertex_count(), -1);
  for (std::size_t q = 0; q < targets.size(); ++q) target_pos[static_cast<std::size_t>(targets[q])] = static_cast<int>(q);
  if (target_pos[static_cast<std::size_t>(v)] >= 0) throw std::invalid_argument("start vertex is a target");

  // Vertices the walk can visit before absorption.
  std::vector<int> local(d.vertex_count(), -1);
  std::vector<VertexId> comp{v};
  local[static_cast<std::size_t>(v)] = 0;
  bool reaches_target = false;
  for (std::size_t h = 0; h < comp.size(); ++h)
    for (const auto& nb : d.neighbors(comp[h])) {
      if (nb.weight == 0.0) continue;
      if (target_pos[static_cast<std::size_t>(nb.vertex)] >= 0) {
        reaches_target = true;
        continue;
      }
      if (local[static_cast<std::size_t>(nb.vertex)] < 0) {
        local[static_cast<std::size_t>(nb.vertex)] = static_cast<int>(comp.size());
        comp.push_back(nb.vertex);
      }
    }
  if (!reaches_target) throw std::invalid_argument("targets cannot be reached from the start vertex");

  const auto n = static_cast<Eigen::Index>(comp.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t q = 0; q < comp.size(); ++q) {
    trip.emplace_back(static_cast<int>(q), static_cast<int>(q), 1.0);
    const double pi = d.conductance(comp[q]);
    for (const auto& nb : d.neighbors(comp[q])) {
      const int j = local[static_cast<std::size_t>(nb.vertex)];
      if (j >= 0 && nb.weight != 0.0) trip.emplace_back(j, static_cast<int>(q), -nb.weight / pi);
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericalError("absorption system is singular");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[0] = 1.0;
  const Eigen::VectorXd g = lu.solve(e);

  std::vector<double> out(targets.size(), 0.0);
  for (std::size_t q = 0; q < comp.size(); ++q) {
    const double pi = d.conductance(comp[q]);
    for (const auto& nb : d.neighbors(comp[q])) {
      const int t = target_pos[static_cast<std::size_t>(nb.vertex)];
      if (t >= 0) out[static_cast<std::size_t>(t)] += g[static_cast<Eigen::Index>(q)] * nb.weight / pi;
    }
  }
  return out;
}

WalkResult random_walk(const LaplacianSystem& sys, VertexId start, std::span<const VertexId> absorbing, Rng& rng) {
  const GridDomain& d = sys.domain();
  if (absorbing.empty()) throw std::invalid_argument("absorbing set is empty");
  std::vector<char> stop(d.vertex_count(), 0);
  for (VertexId a : absorbing) stop[static_cast<std::size_t>(a)] = 1;
  if (stop[static_cast<std::size_t>(start)]) throw std::invalid_argument("walk starts inside the absorbing set");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  WalkResult res;
  VertexId x = start;
  res.path.push_back(x);
  while (!stop[static_cast<std::size_t>(x)]) {
    double r = unif(rng) * d.conductance(x);
    VertexId next = kNoVertex;
    for (const auto& nb : d.neighbors(x)) {
      if (nb.weight == 0.0) continue;
      next = nb.vertex;
      r -= nb.weight;
      if (r < 0.0) break;
    }
    x = next;
    res.path.push_back(x);
  }
  res.hit = x;
  return res;
}

Field laplacian(const Field& f) {
  const GridDomain& d = *f.domain;
  Field out(f.domain, 0.0);
  for (std::size_t v = 0; v < d.vertex_count(); ++v)
    for (const auto& nb : d.neighbors(static_cast<VertexId>(v)))
      out.values[v] += nb.weight * (f[nb.vertex] - f.values[v]);
  return out;
}

double gradient_inner(const Field& f, const Field& g) {
  double s = 0.0;
  for (const auto& e : f.domain->edges()) s += e.weight * (f[e.v] - f[e.u]) * (g[e.v] - g[e.u]);
  return s;
}

}  // namespace dgff
