#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <span>
#include <vector>

#include "dgff/lattice.hpp"
#include "dgff/rng.hpp"

namespace dgff {

/// Real values on every vertex of a domain. Entries that carry no data (for
/// instance interior entries of a boundary-condition field) are NaN.
struct Field {
  DomainPtr domain;
  std::vector<double> values;

  Field() = default;
  explicit Field(DomainPtr d, double fill = kNaN)
      : domain(std::move(d)), values(domain ? domain->vertex_count() : 0, fill) {}

  double& operator[](VertexId v) { return values[static_cast<std::size_t>(v)]; }
  double operator[](VertexId v) const { return values[static_cast<std::size_t>(v)]; }
  [[nodiscard]] std::size_t size() const { return values.size(); }
};

/// Weighted graph Laplacian restricted to a set of free vertices, with a
/// cached sparse Cholesky factorization. By default the free vertices are the
/// interior of the domain; every other vertex acts as a pinned boundary.
class LaplacianSystem {
 public:
  explicit LaplacianSystem(DomainPtr domain);
  LaplacianSystem(DomainPtr domain, std::vector<VertexId> free_vertices);

  [[nodiscard]] const GridDomain& domain() const { return *domain_; }
  [[nodiscard]] const DomainPtr& domain_ptr() const { return domain_; }
  [[nodiscard]] std::span<const VertexId> free_vertices() const { return free_; }
  [[nodiscard]] std::size_t size() const { return free_.size(); }
  /// Dense index of v among the free vertices, or -1 if v is pinned.
  [[nodiscard]] int free_index(VertexId v) const { return index_[static_cast<std::size_t>(v)]; }
  [[nodiscard]] bool is_free(VertexId v) const { return free_index(v) >= 0; }

  /// Precision matrix: pi(v) on the diagonal, -w(u,v) off it.
  [[nodiscard]] const Eigen::SparseMatrix<double>& precision() const { return precision_; }

  /// Solves precision * x = rhs. The residual is checked against
  /// 1e-12 (1 + |rhs|_inf) and refined iteratively if needed.
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// x with covariance precision^{-1}, given i.i.d. standard normals z.
  [[nodiscard]] Eigen::VectorXd correlate(const Eigen::VectorXd& z) const;

  /// Right-hand side contributed by pinned values: sum over pinned
  /// neighbors u of w(u,v) f(u).
  [[nodiscard]] Eigen::VectorXd pinned_rhs(const Field& pinned) const;

 private:
  void factorize();

  DomainPtr domain_;
  std::vector<VertexId> free_;
  std::vector<int> index_;
  Eigen::SparseMatrix<double> precision_;
  std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>>> llt_;
};

/// Discrete harmonic interpolation of the pinned values.
Field harmonic_extension(const LaplacianSystem& sys, const Field& boundary_values);

/// Expected number of visits G(u, .) to each vertex by the weighted walk from
/// u before it reaches a pinned vertex. Computed from the walk's transition
/// matrix, not from the precision factorization.
Field green_function(const LaplacianSystem& sys, VertexId u);

/// Exit distribution of the weighted walk from v absorbed on `targets`;
/// entries follow the order of `targets`.
std::vector<double> harmonic_measure(const LaplacianSystem& sys, VertexId v, std::span<const VertexId> targets);

struct WalkResult {
  std::vector<VertexId> path;
  VertexId hit = kNoVertex;
};

/// Weighted random walk from start until it first enters `absorbing`.
WalkResult random_walk(const LaplacianSystem& sys, VertexId start, std::span<const VertexId> absorbing, Rng& rng);

/// Delta f(v) = sum_u w(u,v) (f(u) - f(v)).
Field laplacian(const Field& f);
/// Weighted gradient inner product over undirected edges.
double gradient_inner(const Field& f, const Field& g);

}  // namespace dgff
