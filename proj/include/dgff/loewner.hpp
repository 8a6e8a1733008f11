#pragma once

#include <limits>
#include <span>
#include <vector>

#include "dgff/types.hpp"

namespace dgff {

/// Samples (t_k, W_k) of a chordal driving function; t_0 = 0, W_0 = 0.
struct DrivingFunction {
  std::vector<double> t;
  std::vector<double> W;

  [[nodiscard]] std::size_t size() const { return t.size(); }
  [[nodiscard]] double horizon() const { return t.empty() ? 0.0 : t.back(); }
  /// Linear interpolation; clamps outside [0, horizon].
  [[nodiscard]] double at(double time) const;
  /// Throws unless times strictly increase from 0, values are finite and
  /// W_0 = 0.
  void validate() const;
};

/// Vertical-slit zipper. Each point is mapped through the slit maps of the
/// previous steps; its image z gives W_k = Re z and dt_k = (Im z)^2 / 4.
/// Extraction stops once the capacity exceeds `max_capacity`.
DrivingFunction extract_driving(std::span<const Complex> path,
                                double max_capacity = std::numeric_limits<double>::infinity());

/// Half-plane capacity of the path.
double capacity(std::span<const Complex> path);

/// Trace at n_steps uniform capacity times. Each step is a vertical slit at
/// the driving value of the step midpoint; the trace point is the image of
/// the slit tip under the composed inverse maps.
std::vector<Complex> solve_trace(const DrivingFunction& W, std::size_t n_steps);

/// Fixed-frame coordinates of a driving function.
struct FixedFramePath {
  std::vector<double> s;
  std::vector<double> Y;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> W;
};

struct FixedFrameOptions {
  /// First sample: y - x = exp(s_min) with W = 0.
  double s_min = -12.0;
  /// Largest increment of s per substep.
  double ds_max = 1e-3;
  /// Largest change of Y per substep caused by the motion of W.
  double dy_max = 1e-3;
};

/// Force points x_t < W_t < y_t started from 0-/0+, with
/// s = log(y - x) and Y = (2W - x - y)/(y - x). W is taken linear between
/// samples; each substep applies the exact flow of a constant driving value.
FixedFramePath to_fixed_frame(const DrivingFunction& W, const FixedFrameOptions& opt = {});

struct Reconstruction {
  DrivingFunction driving;
  /// Bound on the error from truncating the integrals at the first sample.
  double truncation_bound = 0.0;
};

/// Chordal driving function of a fixed-frame path: capacity time
/// t*(s) = 1/8 int e^{2u} (1 - Y_u^2) du and value
/// w_s = e^s Y_s / 2 + 1/2 int e^u Y_u du, with Y linear between samples and
/// held constant before the first one.
Reconstruction from_fixed_frame(std::span<const double> s, std::span<const double> Y);

}  // namespace dgff
