#include "dgff/conformal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dgff {

namespace {

const Complex I{0.0, 1.0};

Complex apply_stage(const ConformalMap::Stage& s, Complex z) {
  if (s.kind == ConformalMap::Kind::half_disc) {
    const Complex zeta = (z - s.center) / s.radius;
    if (std::abs(zeta) == 0.0) throw std::domain_error("half-disc map evaluated at its pole");
    return -0.5 * (zeta + 1.0 / zeta);
  }
  if (is_infinite(z)) {
    if (s.c == Complex{}) return kInfinity;
    return s.a / s.c;
  }
  const Complex den = s.c * z + s.d;
  if (std::abs(den) == 0.0) throw std::domain_error("Mobius map evaluated at its pole");
  return (s.a * z + s.b) / den;
}

Complex invert_stage(const ConformalMap::Stage& s, Complex w) {
  if (s.kind == ConformalMap::Kind::half_disc) {
    // zeta^2 + 2 w zeta + 1 = 0; keep the root inside the unit disc.
    const Complex r = std::sqrt(w * w - 1.0);
    Complex zeta = -w + r;
    if (std::abs(zeta) > 1.0) zeta = -w - r;
    return s.center + s.radius * zeta;
  }
  const Complex den = -s.c * w + s.a;
  if (std::abs(den) == 0.0) return kInfinity;
  return (s.d * w - s.b) / den;
}

}  // namespace

ConformalMap ConformalMap::half_disc(double radius, Complex center) {
  if (!(radius > 0.0)) throw std::invalid_argument("half-disc radius must be positive");
  ConformalMap m;
  Stage s;
  s.kind = Kind::half_disc;
  s.center = center;
  s.radius = radius;
  m.stages_.push_back(s);
  return m;
}

ConformalMap ConformalMap::mobius(Complex a, Complex b, Complex c, Complex d) {
  if (std::abs(a * d - b * c) == 0.0) throw std::invalid_argument("degenerate Mobius map");
  ConformalMap m;
  Stage s;
  s.kind = Kind::mobius;
  s.a = a, s.b = b, s.c = c, s.d = d;
  m.stages_.push_back(s);
  return m;
}

ConformalMap ConformalMap::then(const ConformalMap& next) const {
  ConformalMap m = *this;
  m.stages_.insert(m.stages_.end(), next.stages_.begin(), next.stages_.end());
  return m;
}

ConformalMap ConformalMap::anchored_at(Complex p) const {
  const double shift = (*this)(p).real();
  return then(mobius(1.0, -shift, 0.0, 1.0));
}

Complex ConformalMap::operator()(Complex z) const {
  for (const auto& s : stages_) z = apply_stage(s, z);
  return z;
}

Complex ConformalMap::inverse(Complex w) const {
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) w = invert_stage(*it, w);
  return w;
}

std::vector<Complex> apply(const ConformalMap& map, std::span<const Complex> path, double start_tolerance,
                           double tolerance) {
  std::vector<Complex> out;
  out.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    Complex w = map(path[k]);
    if (k == 0) {
      if (std::abs(w) > start_tolerance) throw std::domain_error("path does not start at the map's root");
      w = 0.0;
    } else if (!(w.imag() > -tolerance)) {
      throw std::domain_error("point " + std::to_string(k) + " maps outside the upper half-plane");
    }
    out.push_back(w);
  }
  return out;
}

double d_star(Complex z, Complex w) {
  auto psi = [](Complex p) { return is_infinite(p) ? Complex{1.0, 0.0} : (p - I) / (p + I); };
  return std::abs(psi(z) - psi(w));
}

double half_disc_inradius(double radius) {
  // The preimage of i is i R (sqrt 2 - 1).
  const double h = radius * (std::sqrt(2.0) - 1.0);
  return std::min(h, radius - h);
}

}  // namespace dgff
