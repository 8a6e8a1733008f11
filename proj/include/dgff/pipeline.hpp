#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgff/conformal.hpp"
#include "dgff/gaussian.hpp"
#include "dgff/interface.hpp"
#include "dgff/loewner.hpp"

namespace dgff {

struct DomainConfig {
  std::string lattice = "tg";
  std::string shape = "rhombus";  // rhombus | rectangle | half-disc
  int m = 20;
  int n = 20;
  double radius = 20.0;
};

DomainPtr make_domain(const DomainConfig& cfg);

/// Half-disc map of a half-disc domain, translated so that x_split goes to a
/// point of the imaginary axis near 0.
ConformalMap domain_map(const GridDomain& domain);

struct InterfaceSample {
  Field field;
  InterfacePath gamma;
  /// Image of gamma without its last point (which maps to infinity).
  std::vector<Complex> image;
  DrivingFunction driving;
};

/// Samples a field, extracts its interface, maps it to the half-plane and
/// extracts the driving function up to capacity `max_capacity`.
InterfaceSample interface_driving(const GaussianModel& model, const ConformalMap& phi, Rng& rng,
                                  double max_capacity);

/// n independent driving functions, stream k seeded by (seed, k).
std::vector<DrivingFunction> driving_ensemble(const DomainPtr& domain, double a, double b, std::size_t n,
                                              std::uint64_t seed, double max_capacity, unsigned threads = 0);

struct FieldInterface {
  Field field;
  InterfacePath gamma;
};

/// n independent (field, interface) pairs.
std::vector<FieldInterface> interface_ensemble(const DomainPtr& domain, double a, double b, std::size_t n,
                                               std::uint64_t seed, unsigned threads = 0);

}  // namespace dgff
