#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>

#include "dgff/harmonic.hpp"
#include "dgff/interface.hpp"

namespace dgff {

/// Height-gap constant for the triangular grid, 3^{-1/4} sqrt(pi/8).
inline const double kLambdaTG = std::pow(3.0, -0.25) * std::sqrt(std::numbers::pi / 8.0);
/// sqrt(pi/8): the gap when the field is normalized like the continuum GFF,
/// which is also the lattice normalization on the square grid.
inline const double kLambdaGFF = std::sqrt(std::numbers::pi / 8.0);
/// Conditional standard deviation of one TG site given its six neighbors.
inline const double kSingleSiteSdTG = 1.0 / std::sqrt(6.0);

/// Gaussian field with density proportional to
/// exp(-1/2 sum_edges w (h(v) - h(u))^2) on the free vertices, with the other
/// vertices pinned.
class GaussianModel {
 public:
  /// DGFF on the interior of the domain with the given boundary values.
  GaussianModel(DomainPtr domain, const Field& boundary_values);

  [[nodiscard]] const LaplacianSystem& system() const { return *sys_; }
  [[nodiscard]] const GridDomain& domain() const { return sys_->domain(); }
  [[nodiscard]] const DomainPtr& domain_ptr() const { return sys_->domain_ptr(); }
  /// Mean on every vertex (pinned values on pinned vertices).
  [[nodiscard]] const Field& mean() const { return mean_; }
  [[nodiscard]] const Field& pinned_values() const { return pinned_; }

  [[nodiscard]] Field sample(Rng& rng) const;
  /// Exact covariance; zero if either vertex is pinned.
  [[nodiscard]] double covariance(VertexId u, VertexId v) const;
  /// Dense covariance on the free vertices, in free_vertices() order.
  [[nodiscard]] Eigen::MatrixXd covariance_matrix() const;

 private:
  GaussianModel(std::shared_ptr<const LaplacianSystem> sys, Field mean, Field pinned);
  friend GaussianModel conditional_model(const GaussianModel&, std::span<const VertexId>, const Field&);

  std::shared_ptr<const LaplacianSystem> sys_;
  Field mean_;
  Field pinned_;
};

/// Field equal to b on the plus arc, -a on the minus arc, NaN inside.
Field boundary_field(const DomainPtr& domain, double a, double b);

/// Law of the model given its values on `pinned` (which must contain every
/// vertex already pinned in the model). The mean is obtained from the Schur
/// complement formula mu_F - Q_FF^{-1} Q_FP (x_P - mu_P).
GaussianModel conditional_model(const GaussianModel& model, std::span<const VertexId> pinned, const Field& values);

struct DirichletEnergy {
  /// sum over all edges of w (f(v) - f(u))^2
  double discrete = 0.0;
  /// squared differences summed over edges shared by two triangles
  double interior_edge_sum = 0.0;
  /// squared differences summed over boundary edges
  double boundary_edge_sum = 0.0;
  /// integral of |grad f|^2 for the piecewise-affine interpolation (TG only)
  std::optional<double> affine_continuum;
};

DirichletEnergy dirichlet_energy(const Field& f);

/// Harmonic extension of the data on the boundary and on the vertices
/// adjacent to the interface; `values` must be finite there.
Field conditional_mean_given_interface(const InterfacePath& gamma, const Field& values);

}  // namespace dgff
