#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dgff/gaussian.hpp"
#include "dgff/loewner.hpp"
#include "dgff/rng.hpp"

namespace dgff {

/// SLE(kappa; rho1, rho2). rho1 belongs to the left force point (boundary
/// height -a), rho2 to the right one (boundary height b).
struct SleParams {
  double kappa = 4.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double a = kLambdaTG;
  double b = kLambdaTG;
  double lambda = kLambdaTG;

  /// rho1 = a / lambda - 1, rho2 = b / lambda - 1.
  static SleParams from_heights(double a, double b, double lambda = kLambdaTG, double kappa = 4.0);
  static SleParams from_rho(double kappa, double rho1, double rho2);

  [[nodiscard]] double a_tilde() const { return 1.0 + rho1 / 2.0; }
  [[nodiscard]] double b_tilde() const { return 1.0 + rho2 / 2.0; }
  /// Exponents of the stationary law (1+x)^{alpha-1} (1-x)^{beta-1}.
  [[nodiscard]] double alpha() const { return 4.0 * a_tilde() / kappa; }
  [[nodiscard]] double beta() const { return 4.0 * b_tilde() / kappa; }
};

struct DriftDiffusion {
  double q2;  // drift
  double q1;  // squared diffusion coefficient
};

/// q2(y) = -a~ (y - 1) - b~ (y + 1), q1(y) = kappa (1 - y^2) / 2.
DriftDiffusion drift_and_diffusion(const SleParams& p, double y);

/// Normalized stationary density of Y.
double stationary_density(const SleParams& p, double x);
double stationary_cdf(const SleParams& p, double x);
/// One draw from the stationary law.
double sample_stationary(const SleParams& p, Rng& rng);

struct DiffusionPath {
  std::vector<double> s;
  std::vector<double> Y;
  std::uint64_t seed = 0;
};

struct Stationary {};
using InitialState = std::variant<double, Stationary>;

/// Euler-Maruyama for dY = q2 ds + sqrt(q1) dB on [s0, s0 + S], clamped to
/// [-1, 1], with substeps when Y comes close to +-1. Every `record_every`-th
/// step is stored.
DiffusionPath simulate_Y(const SleParams& p, double s0, double S, double ds, InitialState init, Rng& rng,
                         std::size_t record_every = 1);

struct SleDrivingOptions {
  double ds = 1e-4;
  double s_min = -12.0;
};

/// Driving function on [0, T]: a stationary fixed-frame path started at s_min
/// and run until its capacity time passes T.
DrivingFunction sle_driving(const SleParams& p, double T, Rng& rng, const SleDrivingOptions& opt = {});

/// Trace of sle_driving at n_points uniform capacity times.
std::vector<Complex> sle_trace(const SleParams& p, double T, std::size_t n_points, Rng& rng,
                               const SleDrivingOptions& opt = {});

}  // namespace dgff
