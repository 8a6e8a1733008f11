#include "dgff/pipeline.hpp"

#include <stdexcept>

#include "dgff/parallel.hpp"

namespace dgff {

DomainPtr make_domain(const DomainConfig& cfg) {
  const LatticeSpec spec = lattice_by_name(cfg.lattice);
  if (cfg.shape == "rhombus") return build_domain(spec, Rhombus{cfg.m, cfg.n});
  if (cfg.shape == "rectangle") return build_domain(spec, Rectangle{cfg.m, cfg.n});
  if (cfg.shape == "half-disc") return build_domain(spec, HalfDisc{cfg.radius});
  throw std::invalid_argument("unknown shape '" + cfg.shape + "'");
}

ConformalMap domain_map(const GridDomain& domain) {
  const auto* hd = std::get_if<HalfDisc>(&domain.shape());
  if (!hd) throw std::invalid_argument("a closed-form map to the half-plane exists only for half-disc domains");
  return ConformalMap::half_disc(hd->radius, domain.shape_origin()).anchored_at(domain.x_point());
}

InterfaceSample interface_driving(const GaussianModel& model, const ConformalMap& phi, Rng& rng,
                                  double max_capacity) {
  InterfaceSample out;
  out.field = model.sample(rng);
  out.gamma = extract_interface(out.field);
  std::vector<Complex> pts(out.gamma.points.begin(), out.gamma.points.end() - 1);
  const double R = std::get<HalfDisc>(model.domain().shape()).radius;
  out.image = apply(phi, pts, 3.0 / R);
  out.driving = extract_driving(out.image, max_capacity);
  return out;
}

std::vector<DrivingFunction> driving_ensemble(const DomainPtr& domain, double a, double b, std::size_t n,
                                              std::uint64_t seed, double max_capacity, unsigned threads) {
  const GaussianModel model(domain, boundary_field(domain, a, b));
  const ConformalMap phi = domain_map(*domain);
  return parallel_map(
      n,
      [&](std::size_t k) {
        Rng rng = stream_rng(seed, k);
        return interface_driving(model, phi, rng, max_capacity).driving;
      },
      threads);
}

std::vector<FieldInterface> interface_ensemble(const DomainPtr& domain, double a, double b, std::size_t n,
                                               std::uint64_t seed, unsigned threads) {
  const GaussianModel model(domain, boundary_field(domain, a, b));
  return parallel_map(
      n,
      [&](std::size_t k) {
        Rng rng = stream_rng(seed, k);
        FieldInterface fi;
        fi.field = model.sample(rng);
        fi.gamma = extract_interface(fi.field);
        return fi;
      },
      threads);
}

}  // namespace dgff
