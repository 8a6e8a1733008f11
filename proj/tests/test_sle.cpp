#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dgff/sle.hpp"
#include "dgff/stats.hpp"

using namespace dgff;

namespace {

const double lam = kLambdaTG;

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// Chordal SLE(kappa; rho1, rho2) driving value at time T, with force points
// started at -+2 sqrt(t0) and W = 0.
double chordal_euler(const SleParams& p, double T, Rng& rng) {
  std::normal_distribution<double> normal;
  const double t0 = 1e-6;
  double t = t0, w = 0.0, x = -2.0 * std::sqrt(t0), y = 2.0 * std::sqrt(t0);
  while (t < T) {
    const double gap = std::min(w - x, y - w);
    const double dt = std::min({T - t, 1e-4, 1e-3 * gap * gap});
    const double dw = std::sqrt(p.kappa * dt) * normal(rng) + (p.rho1 / (w - x) + p.rho2 / (w - y)) * dt;
    x += 2.0 / (x - w) * dt;
    y += 2.0 / (y - w) * dt;
    w = std::clamp(w + dw, x + 1e-12, y - 1e-12);
    t += dt;
  }
  return w;
}

}  // namespace

TEST_CASE("parameters from boundary heights") {
  const SleParams p = SleParams::from_heights(lam, lam);
  CHECK(p.rho1 == doctest::Approx(0.0));
  CHECK(p.rho2 == doctest::Approx(0.0));
  CHECK(p.kappa == 4.0);
  const SleParams q = SleParams::from_heights(3.0 * lam, 0.5 * lam);
  CHECK(q.rho1 == doctest::Approx(2.0));
  CHECK(q.rho2 == doctest::Approx(-0.5));
  CHECK(q.alpha() == doctest::Approx(2.0));
  CHECK(q.beta() == doctest::Approx(0.75));
  const SleParams r = SleParams::from_rho(4.0, 2.0, -0.5);
  CHECK(r.a == doctest::Approx(3.0 * lam));
  CHECK(r.b == doctest::Approx(0.5 * lam));
  CHECK_THROWS_AS(SleParams::from_heights(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("drift and diffusion coefficients") {
  const SleParams p = SleParams::from_heights(lam, lam);
  for (double y : {-0.9, -0.2, 0.0, 0.5}) {
    CHECK(drift_and_diffusion(p, y).q2 == doctest::Approx(-2.0 * y));
    CHECK(drift_and_diffusion(p, y).q1 == doctest::Approx(2.0 * (1.0 - y * y)));
  }
  const SleParams q = SleParams::from_heights(3.0 * lam, lam);
  CHECK(drift_and_diffusion(q, 0.0).q2 == doctest::Approx(1.0));
  CHECK(drift_and_diffusion(q, 1.0).q2 == doctest::Approx(-2.0));
  CHECK(drift_and_diffusion(q, -1.0).q2 == doctest::Approx(4.0));
  CHECK(drift_and_diffusion(q, 1.0).q1 == 0.0);
}

TEST_CASE("stationary density: closed forms") {
  const SleParams flat = SleParams::from_heights(lam, lam);
  for (double x : {-0.99, -0.3, 0.0, 0.7}) CHECK(stationary_density(flat, x) == doctest::Approx(0.5).epsilon(1e-13));
  const SleParams hump = SleParams::from_heights(3.0 * lam, 3.0 * lam);
  for (double x : {-0.99, -0.3, 0.0, 0.7})
    CHECK(stationary_density(hump, x) == doctest::Approx(0.75 * (1.0 - x * x)).epsilon(1e-13));
  CHECK(stationary_cdf(flat, 0.2) == doctest::Approx(0.6).epsilon(1e-13));
  CHECK(stationary_cdf(hump, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK_THROWS_AS(stationary_density(flat, 1.0), std::domain_error);
}

TEST_CASE("stationary density: normalization, symmetry, cdf") {
  boost::math::quadrature::tanh_sinh<double> quad;
  for (auto [a, b] : {std::pair{0.2, 0.7}, std::pair{1.0, 2.5}, std::pair{4.0, 0.3}}) {
    const SleParams p = SleParams::from_heights(a * lam, b * lam);
    const SleParams q = SleParams::from_heights(b * lam, a * lam);
    const double total = quad.integrate([&](double x) { return stationary_density(p, x); }, -1.0, 1.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    for (double x : {-0.8, -0.1, 0.4}) {
      CHECK(stationary_density(p, x) == doctest::Approx(stationary_density(q, -x)).epsilon(1e-12));
      const double part = quad.integrate([&](double u) { return stationary_density(p, u); }, -1.0, x);
      CHECK(stationary_cdf(p, x) == doctest::Approx(part).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(stationary_density(SleParams::from_heights(-lam, lam), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(stationary_density(SleParams::from_heights(-2.0 * lam, lam), 0.0), std::invalid_argument);
}

TEST_CASE("stationary sampler follows the stationary law") {
  Rng rng(3);
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{3.0, 0.5}, std::pair{0.3, 2.0}}) {
    const SleParams p = SleParams::from_heights(a * lam, b * lam);
    std::vector<double> xs(20000);
    for (double& x : xs) x = sample_stationary(p, rng);
    CHECK(ks_test(xs, [&](double x) { return stationary_cdf(p, x); }).pass);
  }
}

TEST_CASE("simulate_Y: bookkeeping and errors") {
  const SleParams p = SleParams::from_heights(lam, lam);
  Rng rng(1);
  const DiffusionPath path = simulate_Y(p, 2.0, 1.0, 1e-3, 0.3, rng, 10);
  REQUIRE(path.s.size() == 101);
  CHECK(path.s.front() == 2.0);
  CHECK(path.Y.front() == 0.3);
  CHECK(path.s.back() == doctest::Approx(3.0));
  for (double y : path.Y) CHECK(std::abs(y) <= 1.0);
  CHECK_THROWS_AS(simulate_Y(p, 0.0, 1.0, 0.0, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(simulate_Y(p, 0.0, 1.0, 1e-3, 1.5, rng), std::invalid_argument);
  Rng r1(9), r2(9);
  CHECK(simulate_Y(p, 0.0, 0.5, 1e-3, Stationary{}, r1).Y == simulate_Y(p, 0.0, 0.5, 1e-3, Stationary{}, r2).Y);
}

TEST_CASE("stationary start stays stationary") {
  const SleParams p = SleParams::from_heights(2.0 * lam, 0.6 * lam);
  Rng rng(44);
  std::vector<double> y0, y1;
  for (int k = 0; k < 3000; ++k) {
    const DiffusionPath path = simulate_Y(p, 0.0, 1.0, 1e-3, Stationary{}, rng, 1000);
    y0.push_back(path.Y.front());
    y1.push_back(path.Y.back());
  }
  CHECK(ks_two_sample(y0, y1).pass);
  CHECK(ks_test(y1, [&](double x) { return stationary_cdf(p, x); }).pass);
}

TEST_CASE("a repelling left force point pushes the driving function right") {
  const SleParams p = SleParams::from_heights(3.0 * lam, lam);
  const int N = 400;
  std::vector<double> direct, fixed_frame;
  Rng rng(8);
  for (int k = 0; k < N; ++k) direct.push_back(chordal_euler(p, 1.0, rng));
  for (int k = 0; k < N; ++k) fixed_frame.push_back(sle_driving(p, 1.0, rng, {1e-4, -8.0}).at(1.0));
  const double m1 = mean_of(direct), s1 = se_of(direct);
  const double m2 = mean_of(fixed_frame), s2 = se_of(fixed_frame);
  CHECK(m1 > 3.0 * s1);
  CHECK(m2 > 3.0 * s2);
  CHECK(std::abs(m1 - m2) <= 4.0 * std::hypot(s1, s2));
}

TEST_CASE("SLE driving functions") {
  const SleParams p = SleParams::from_heights(lam, lam);
  Rng rng(2);
  const DrivingFunction z = sle_driving(p, 0.0, rng);
  CHECK(z.size() == 1);
  CHECK(z.W[0] == 0.0);
  const DrivingFunction W = sle_driving(p, 1.0, rng);
  W.validate();
  CHECK(W.horizon() >= 1.0);
  const double qv = quadratic_variation(W, 1.0, 1000);
  CHECK(qv > 3.5);
  CHECK(qv < 4.5);
  const auto trace = sle_trace(p, 1.0, 200, rng);
  REQUIRE(trace.size() == 201);
  CHECK(trace[0] == Complex{});
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k].imag() > 0.0);
  CHECK_THROWS_AS(sle_driving(p, -1.0, rng), std::invalid_argument);
}
