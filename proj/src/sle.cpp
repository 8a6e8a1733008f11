#include "dgff/sle.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <random>
#include <stdexcept>

namespace dgff {

namespace {

void require_integrable(const SleParams& p) {
  if (!(p.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(p.a_tilde() > 0.0) || !(p.b_tilde() > 0.0))
    throw std::invalid_argument("boundary heights must exceed -lambda (rho > -2)");
}

}  // namespace

SleParams SleParams::from_heights(double a, double b, double lambda, double kappa) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  SleParams p;
  p.kappa = kappa;
  p.a = a;
  p.b = b;
  p.lambda = lambda;
  p.rho1 = a / lambda - 1.0;
  p.rho2 = b / lambda - 1.0;
  return p;
}

SleParams SleParams::from_rho(double kappa, double rho1, double rho2) {
  SleParams p;
  p.kappa = kappa;
  p.rho1 = rho1;
  p.rho2 = rho2;
  p.a = (rho1 + 1.0) * p.lambda;
  p.b = (rho2 + 1.0) * p.lambda;
  return p;
}

DriftDiffusion drift_and_diffusion(const SleParams& p, double y) {
  y = std::clamp(y, -1.0, 1.0);
  return {-p.a_tilde() * (y - 1.0) - p.b_tilde() * (y + 1.0), p.kappa * (1.0 - y * y) / 2.0};
}

double stationary_density(const SleParams& p, double x) {
  require_integrable(p);
  if (!(std::abs(x) < 1.0)) throw std::domain_error("stationary density is defined on (-1, 1)");
  const double al = p.alpha(), be = p.beta();
  const double log_norm = (al + be - 1.0) * std::log(2.0) + std::log(boost::math::beta(al, be));
  return std::exp((al - 1.0) * std::log1p(x) + (be - 1.0) * std::log1p(-x) - log_norm);
}

double stationary_cdf(const SleParams& p, double x) {
  require_integrable(p);
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(p.alpha(), p.beta(), (1.0 + x) / 2.0);
}

double sample_stationary(const SleParams& p, Rng& rng) {
  require_integrable(p);
  std::gamma_distribution<double> ga(p.alpha(), 1.0), gb(p.beta(), 1.0);
  const double u = ga(rng), v = gb(rng);
  return std::clamp(2.0 * u / (u + v) - 1.0, -1.0, 1.0);
}

DiffusionPath simulate_Y(const SleParams& p, double s0, double S, double ds, InitialState init, Rng& rng,
                         std::size_t record_every) {
  require_integrable(p);
  if (!(ds > 0.0) || !(S >= 0.0)) throw std::invalid_argument("need ds > 0 and S >= 0");
  if (record_every == 0) record_every = 1;
  double y;
  if (const double* y0 = std::get_if<double>(&init)) {
    if (!(std::abs(*y0) <= 1.0)) throw std::invalid_argument("initial point must lie in [-1, 1]");
    y = *y0;
  } else {
    y = sample_stationary(p, rng);
  }
  boost::random::normal_distribution<double> normal;
  const double near = 10.0 * std::sqrt(p.kappa * ds / 2.0);
  constexpr int kSub = 16;
  const double sub = ds / kSub, sq = std::sqrt(ds), sq_sub = std::sqrt(sub);
  const auto n = static_cast<std::size_t>(std::llround(S / ds));
  DiffusionPath out;
  out.s.reserve(n / record_every + 2);
  out.Y.reserve(n / record_every + 2);
  out.s.push_back(s0);
  out.Y.push_back(y);
  for (std::size_t k = 1; k <= n; ++k) {
    if (1.0 - std::abs(y) < near) {
      for (int q = 0; q < kSub; ++q) {
        const auto [q2, q1] = drift_and_diffusion(p, y);
        y = std::clamp(y + q2 * sub + std::sqrt(q1) * sq_sub * normal(rng), -1.0, 1.0);
      }
    } else {
      const auto [q2, q1] = drift_and_diffusion(p, y);
      y = std::clamp(y + q2 * ds + std::sqrt(q1) * sq * normal(rng), -1.0, 1.0);
    }
    if (k % record_every == 0 || k == n) {
      out.s.push_back(s0 + static_cast<double>(k) * ds);
      out.Y.push_back(y);
    }
  }
  return out;
}

DrivingFunction sle_driving(const SleParams& p, double T, Rng& rng, const SleDrivingOptions& opt) {
  require_integrable(p);
  if (!(T >= 0.0)) throw std::invalid_argument("T must be nonnegative");
  DrivingFunction zero;
  zero.t = {0.0};
  zero.W = {0.0};
  if (T == 0.0) return zero;

  std::vector<double> s{opt.s_min}, Y{sample_stationary(p, rng)};
  double tstar = std::exp(2.0 * opt.s_min) * (1.0 - Y[0] * Y[0]) / 16.0;
  for (;;) {
    // Extend in chunks until the rough capacity clock passes T.
    while (tstar < 1.02 * T) {
      const double s_last = s.back();
      DiffusionPath chunk = simulate_Y(p, s_last, 0.5, opt.ds, Y.back(), rng);
      for (std::size_t k = 1; k < chunk.s.size(); ++k) {
        const double h = chunk.s[k] - chunk.s[k - 1];
        const double m = 0.5 * (1.0 - chunk.Y[k] * chunk.Y[k]) * std::exp(2.0 * chunk.s[k]) +
                         0.5 * (1.0 - chunk.Y[k - 1] * chunk.Y[k - 1]) * std::exp(2.0 * chunk.s[k - 1]);
        tstar += 0.125 * m * h;
        s.push_back(chunk.s[k]);
        Y.push_back(chunk.Y[k]);
      }
    }
    Reconstruction r = from_fixed_frame(s, Y);
    DrivingFunction& d = r.driving;
    if (d.horizon() < T) {
      tstar = d.horizon();
      continue;
    }
    const double wT = d.at(T);
    const auto cut = static_cast<std::size_t>(std::lower_bound(d.t.begin(), d.t.end(), T) - d.t.begin());
    d.t.resize(cut);
    d.W.resize(cut);
    d.t.push_back(T);
    d.W.push_back(wT);
    return d;
  }
}

std::vector<Complex> sle_trace(const SleParams& p, double T, std::size_t n_points, Rng& rng,
                               const SleDrivingOptions& opt) {
  return solve_trace(sle_driving(p, T, rng, opt), n_points);
}

}  // namespace dgff
