#pragma once

#include <limits>
#include <span>
#include <vector>

#include "dgff/types.hpp"

namespace dgff {

/// Stand-in for the point at infinity of the closed half-plane.
inline const Complex kInfinity{std::numeric_limits<double>::infinity(), 0.0};
inline bool is_infinite(Complex z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

/// Composition of elementary conformal maps, applied in order.
class ConformalMap {
 public:
  enum class Kind { half_disc, mobius };
  struct Stage {
    Kind kind;
    // half_disc: z -> m((z - center) / radius), m(zeta) = -(zeta + 1/zeta)/2
    Complex center{};
    double radius = 1.0;
    // mobius: z -> (a z + b) / (c z + d)
    Complex a{1.0}, b{}, c{}, d{1.0};
  };

  /// Upper half-disc of radius R about `center` onto the upper half-plane;
  /// center + iR goes to 0, center to infinity, center - R to 1.
  static ConformalMap half_disc(double radius, Complex center = {});
  static ConformalMap mobius(Complex a, Complex b, Complex c, Complex d);

  /// This map followed by `next`.
  [[nodiscard]] ConformalMap then(const ConformalMap& next) const;
  /// This map followed by the real translation that sends Re f(p) to 0.
  [[nodiscard]] ConformalMap anchored_at(Complex p) const;

  /// Throws std::domain_error at a pole.
  [[nodiscard]] Complex operator()(Complex z) const;
  /// Inverse of a single half-disc stage composed with Mobius stages.
  [[nodiscard]] Complex inverse(Complex w) const;

  [[nodiscard]] std::span<const Stage> stages() const { return stages_; }

 private:
  std::vector<Stage> stages_;
};

/// Images of a path. The first image is snapped to 0 when it lies within
/// `start_tolerance` of it, otherwise an error is raised; later points must
/// land in the open upper half-plane up to `tolerance`.
std::vector<Complex> apply(const ConformalMap& map, std::span<const Complex> path, double start_tolerance = 1e-9,
                           double tolerance = 0.0);

/// |Psi(z) - Psi(w)| with Psi(z) = (z - i)/(z + i) and Psi(infinity) = 1.
double d_star(Complex z, Complex w);

/// Inradius at the preimage of i for the half-disc map of radius R.
double half_disc_inradius(double radius);

}  // namespace dgff
