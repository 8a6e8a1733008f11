#include "dgff/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dgff {

namespace {

// Forward vertical-slit map of the slit [W, W + 2i sqrt(dt)].
Complex slit_map(Complex z, double W, double dt) {
  const Complex zeta = z - W;
  Complex r = std::sqrt(zeta * zeta + 4.0 * dt);
  if (r.imag() < 0.0) r = -r;
  if (r.imag() == 0.0) r = std::copysign(std::abs(r.real()), zeta.real());
  return W + r;
}

Complex inverse_slit_map(Complex z, double W, double dt) {
  const Complex zeta = z - W;
  Complex r = std::sqrt(zeta * zeta - 4.0 * dt);
  if (r.imag() < 0.0) r = -r;
  if (r.imag() == 0.0) r = std::copysign(std::abs(r.real()), zeta.real());
  return W + r;
}

// int_0^h e^{k v} v^j dv for j = 0, 1, 2
double exp_moment(double k, double h, int j) {
  const double kh = k * h;
  if (std::abs(kh) < 0.05) {
    double term = std::pow(h, j + 1);  // k^n h^{n+j+1} / n!
    double sum = 0.0;
    for (int n = 0; n < 30; ++n) {
      sum += term / (n + j + 1);
      term *= kh / (n + 1);
    }
    return sum;
  }
  const double e = std::exp(kh), em1 = std::expm1(kh);
  switch (j) {
    case 0:
      return em1 / k;
    case 1:
      return h * e / k - em1 / (k * k);
    default:
      return h * h * e / k - 2.0 * h * e / (k * k) + 2.0 * em1 / (k * k * k);
  }
}

}  // namespace

double DrivingFunction::at(double time) const {
  if (t.empty()) return 0.0;
  if (time <= t.front()) return W.front();
  if (time >= t.back()) return W.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t k = static_cast<std::size_t>(it - t.begin());
  const double f = (time - t[k - 1]) / (t[k] - t[k - 1]);
  return W[k - 1] + f * (W[k] - W[k - 1]);
}

void DrivingFunction::validate() const {
  if (t.empty() || t.size() != W.size()) throw std::invalid_argument("driving function needs matching samples");
  if (t[0] != 0.0 || W[0] != 0.0) throw std::invalid_argument("driving function must start at (0, 0)");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(W[k])) throw std::invalid_argument("driving function is not finite");
    if (k > 0 && !(t[k] > t[k - 1]))
      throw std::invalid_argument("driving times must increase strictly (sample " + std::to_string(k) + ")");
  }
}

DrivingFunction extract_driving(std::span<const Complex> path, double max_capacity) {
  if (path.empty()) throw std::invalid_argument("empty path");
  if (path[0] != Complex{}) throw std::invalid_argument("path must start at 0");
  DrivingFunction out;
  out.t.push_back(0.0);
  out.W.push_back(0.0);
  std::vector<double> slit_w, slit_dt;
  double total = 0.0;
  for (std::size_t k = 1; k < path.size() && total <= max_capacity; ++k) {
    Complex z = path[k];
    for (std::size_t j = 0; j < slit_w.size(); ++j) z = slit_map(z, slit_w[j], slit_dt[j]);
    if (!(z.imag() > 0.0))
      throw std::invalid_argument("path is not simple in the upper half-plane at step " + std::to_string(k));
    const double dt = 0.25 * z.imag() * z.imag();
    slit_w.push_back(z.real());
    slit_dt.push_back(dt);
    if (!(total + dt > total)) continue;
    total += dt;
    out.t.push_back(total);
    out.W.push_back(z.real());
  }
  return out;
}

double capacity(std::span<const Complex> path) { return extract_driving(path).horizon(); }

std::vector<Complex> solve_trace(const DrivingFunction& W, std::size_t n_steps) {
  W.validate();
  const double T = W.horizon();
  std::vector<Complex> out{Complex{}};
  if (n_steps == 0 || T == 0.0) return out;
  const double dt = T / static_cast<double>(n_steps);
  std::vector<double> U(n_steps);
  for (std::size_t j = 0; j < n_steps; ++j) U[j] = W.at((static_cast<double>(j) + 0.5) * dt);
  for (std::size_t k = 0; k < n_steps; ++k) {
    Complex z = U[k];
    for (std::size_t j = k + 1; j-- > 0;) z = inverse_slit_map(z, U[j], dt);
    out.push_back(z);
  }
  return out;
}

FixedFramePath to_fixed_frame(const DrivingFunction& W, const FixedFrameOptions& opt) {
  W.validate();
  if (!(opt.ds_max > 0.0 && opt.dy_max > 0.0)) throw std::invalid_argument("ds_max and dy_max must be positive");
  const double T = W.horizon();
  double t = std::exp(2.0 * opt.s_min) / 16.0;
  if (!(t < T)) throw std::invalid_argument("driving function is shorter than the startup step");
  double x = -2.0 * std::sqrt(t), y = 2.0 * std::sqrt(t);
  FixedFramePath out;
  auto record = [&](double w) {
    out.s.push_back(std::log(y - x));
    out.Y.push_back(std::clamp((2.0 * w - x - y) / (y - x), -1.0, 1.0));
    out.t.push_back(t);
    out.x.push_back(x);
    out.y.push_back(y);
    out.W.push_back(w);
  };
  record(0.0);
  std::size_t seg = static_cast<std::size_t>(std::upper_bound(W.t.begin(), W.t.end(), t) - W.t.begin()) - 1;
  while (t < T) {
    while (seg + 1 < W.t.size() && W.t[seg + 1] <= t) ++seg;
    const double t_next = W.t[seg + 1];
    const double slope = (W.W[seg + 1] - W.W[seg]) / (t_next - W.t[seg]);
    const double w = W.W[seg] + slope * (t - W.t[seg]);
    const double lo = w - x, hi = y - w;
    if (!(lo > 0.0 && hi > 0.0))
      throw std::runtime_error("driving value left the force-point bracket at t = " + std::to_string(t));
    double dt = opt.ds_max * lo * hi / 2.0;
    if (slope != 0.0) dt = std::min(dt, std::min(0.5 * std::min(lo, hi), 0.5 * opt.dy_max * (y - x)) / std::abs(slope));
    bool to_knot = false;
    if (dt >= t_next - t) {
      dt = t_next - t;
      to_knot = true;
    }
    if (!(dt > 0.0)) throw std::runtime_error("fixed-frame step size underflow at t = " + std::to_string(t));
    const double u = w + 0.5 * slope * dt;
    x = u - std::sqrt((x - u) * (x - u) + 4.0 * dt);
    y = u + std::sqrt((y - u) * (y - u) + 4.0 * dt);
    t = to_knot ? t_next : t + dt;
    const double wn = to_knot ? W.W[seg + 1] : W.W[seg] + slope * (t - W.t[seg]);
    if (!(x < wn && wn < y))
      throw std::runtime_error("driving value left the force-point bracket at t = " + std::to_string(t));
    record(wn);
  }
  return out;
}

Reconstruction from_fixed_frame(std::span<const double> s, std::span<const double> Y) {
  if (s.empty() || s.size() != Y.size()) throw std::invalid_argument("fixed-frame path needs matching samples");
  std::size_t run = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s[k]) || !(std::abs(Y[k]) <= 1.0 + 1e-12))
      throw std::invalid_argument("fixed-frame values must lie in [-1, 1]");
    if (k > 0 && !(s[k] > s[k - 1])) throw std::invalid_argument("s must increase strictly");
    run = std::abs(Y[k]) >= 1.0 ? run + 1 : 0;
    if (run >= 3)
      throw std::invalid_argument("Y stays at +-1 over an interval near s = " + std::to_string(s[k]) +
                                  "; the time change degenerates");
  }
  auto clampY = [&](std::size_t k) { return std::clamp(Y[k], -1.0, 1.0); };
  Reconstruction out;
  out.truncation_bound = std::exp(s[0]);
  DrivingFunction& d = out.driving;
  d.t.push_back(0.0);
  d.W.push_back(0.0);
  const double y0 = clampY(0);
  double B = 0.5 * std::exp(s[0]) * y0;
  double tstar = std::exp(2.0 * s[0]) * (1.0 - y0 * y0) / 16.0;
  if (tstar > 0.0) {
    d.t.push_back(tstar);
    d.W.push_back(0.5 * std::exp(s[0]) * y0 + B);
  }
  for (std::size_t k = 1; k < s.size(); ++k) {
    const double h = s[k] - s[k - 1];
    const double a = clampY(k - 1), b = clampY(k);
    const double m = (b - a) / h;
    const double e1 = std::exp(s[k - 1]);
    B += 0.5 * e1 * (a * exp_moment(1.0, h, 0) + m * exp_moment(1.0, h, 1));
    tstar += 0.125 * e1 * e1 *
             ((1.0 - a * a) * exp_moment(2.0, h, 0) - 2.0 * a * m * exp_moment(2.0, h, 1) -
              m * m * exp_moment(2.0, h, 2));
    if (!(tstar > d.t.back())) continue;
    d.t.push_back(tstar);
    d.W.push_back(0.5 * std::exp(s[k]) * b + B);
  }
  d.validate();
  return out;
}

}  // namespace dgff
