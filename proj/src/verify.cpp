#include "dgff/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "dgff/gaussian.hpp"
#include "dgff/loewner.hpp"
#include "dgff/parallel.hpp"
#include "dgff/pipeline.hpp"
#include "dgff/sle.hpp"

namespace dgff {

namespace {

EnsembleSummary exact_check(std::string name, std::size_t n, double error, double tol, std::uint64_t seed) {
  EnsembleSummary s;
  s.test_name = std::move(name);
  s.n = n;
  s.estimate = error;
  s.ci_low = s.ci_high = error;
  std::ostringstream os;
  os << "max error < " << tol;
  s.threshold = os.str();
  s.pass = error < tol;
  s.seed = seed;
  return s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

DomainPtr random_rhombus(Rng& rng, int max_interior) {
  std::uniform_int_distribution<int> side(2, 16);
  for (;;) {
    const int m = side(rng), n = side(rng);
    if ((m - 1) * (n - 1) > max_interior) continue;
    DomainPtr d = build_domain(triangular_lattice(), Rhombus{m, n});
    const std::size_t L = d->boundary().size();
    std::uniform_int_distribution<std::size_t> pick(0, L - 1);
    const std::size_t x = pick(rng);
    std::size_t y = pick(rng);
    while (y == x) y = pick(rng);
    return split_boundary_edges(d, x, y);
  }
}

// Piecewise-linear Brownian path sqrt(kappa) B on [0, T] with `knots` steps.
DrivingFunction brownian_driver(Rng& rng, double T, std::size_t knots, double kappa = 4.0) {
  std::normal_distribution<double> normal;
  DrivingFunction W;
  W.t.push_back(0.0);
  W.W.push_back(0.0);
  const double dt = T / static_cast<double>(knots);
  for (std::size_t k = 1; k <= knots; ++k) {
    W.t.push_back(T * static_cast<double>(k) / static_cast<double>(knots));
    W.W.push_back(W.W.back() + std::sqrt(kappa * dt) * normal(rng));
  }
  return W;
}

// Max |extracted W - W| at the extracted times.
double roundtrip_error(const DrivingFunction& W, std::size_t n_steps) {
  const auto trace = solve_trace(W, n_steps);
  const DrivingFunction back = extract_driving(trace);
  double err = 0.0;
  for (std::size_t k = 0; k < back.size(); ++k) err = std::max(err, std::abs(back.W[k] - W.at(back.t[k])));
  return err;
}

double fixed_frame_error(const DrivingFunction& W, const FixedFrameOptions& opt) {
  const FixedFramePath ff = to_fixed_frame(W, opt);
  const Reconstruction rec = from_fixed_frame(ff.s, ff.Y);
  double err = 0.0;
  for (std::size_t k = 0; k < rec.driving.size(); ++k) {
    if (rec.driving.t[k] > W.horizon()) break;
    err = std::max(err, std::abs(rec.driving.W[k] - W.at(rec.driving.t[k])));
  }
  return err;
}

std::vector<EnsembleSummary> exact_suite(const VerifyOptions& opt) {
  std::vector<EnsembleSummary> out;
  Rng rng = stream_rng(opt.seed, 1);

  {
    double err = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const DomainPtr d = random_rhombus(rng, 200);
      const GaussianModel model(d, boundary_field(d, 0.0, 0.0));
      const Eigen::MatrixXd cov = model.covariance_matrix();
      const auto& sys = model.system();
      for (VertexId u : sys.free_vertices()) {
        const Field G = green_function(sys, u);
        for (VertexId v : sys.free_vertices())
          err = std::max(err, std::abs(cov(sys.free_index(u), sys.free_index(v)) - G[v] / d->conductance(v)));
      }
    }
    out.push_back(exact_check("green_covariance", 20, err, 1e-10, opt.seed));
  }

  {
    const DomainPtr d = build_domain(triangular_lattice(), Rhombus{6, 6});
    std::normal_distribution<double> normal;
    double err = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      Field f(d);
      for (double& x : f.values) x = normal(rng);
      const DirichletEnergy e = dirichlet_energy(f);
      const double rhs = (e.interior_edge_sum + 0.5 * e.boundary_edge_sum) / std::sqrt(3.0);
      err = std::max(err, std::abs(*e.affine_continuum - rhs) / rhs);
    }
    out.push_back(exact_check("dirichlet_identity", 100, err, 1e-12, opt.seed));
  }

  {
    const DomainPtr d = build_domain(triangular_lattice(), Rhombus{8, 8});
    const GaussianModel model(d, boundary_field(d, kLambdaTG, kLambdaTG));
    const auto& sys = model.system();
    const Eigen::MatrixXd full = model.covariance_matrix();
    double err = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const Field x = model.sample(rng);
      std::vector<VertexId> free(sys.free_vertices().begin(), sys.free_vertices().end());
      std::shuffle(free.begin(), free.end(), rng);
      const std::size_t k = std::uniform_int_distribution<std::size_t>(1, free.size() - 1)(rng);
      std::vector<VertexId> P(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(k));
      std::vector<VertexId> pinned(d->boundary().begin(), d->boundary().end());
      pinned.insert(pinned.end(), P.begin(), P.end());
      const GaussianModel cond = conditional_model(model, pinned, x);
      const auto& cs = cond.system();
      const auto F = cs.free_vertices();
      Eigen::MatrixXd Sff(F.size(), F.size()), Sfp(F.size(), P.size()), Spp(P.size(), P.size());
      for (std::size_t i = 0; i < F.size(); ++i) {
        for (std::size_t j = 0; j < F.size(); ++j) Sff(i, j) = full(sys.free_index(F[i]), sys.free_index(F[j]));
        for (std::size_t j = 0; j < P.size(); ++j) Sfp(i, j) = full(sys.free_index(F[i]), sys.free_index(P[j]));
      }
      for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < P.size(); ++j) Spp(i, j) = full(sys.free_index(P[i]), sys.free_index(P[j]));
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(Spp);
      const Eigen::MatrixXd schur = Sff - Sfp * ldlt.solve(Sfp.transpose());
      err = std::max(err, (cond.covariance_matrix() - schur).cwiseAbs().maxCoeff());
      Eigen::VectorXd dx(P.size());
      for (std::size_t j = 0; j < P.size(); ++j) dx[j] = x[P[j]] - model.mean()[P[j]];
      const Eigen::VectorXd shift = Sfp * ldlt.solve(dx);
      for (std::size_t i = 0; i < F.size(); ++i)
        err = std::max(err, std::abs(cond.mean()[F[i]] - model.mean()[F[i]] - shift[i]));
    }
    out.push_back(exact_check("markov_schur", 20, err, 1e-10, opt.seed));
  }

  {
    DrivingFunction zero;
    zero.t = {0.0, 1.0};
    zero.W = {0.0, 0.0};
    const auto trace = solve_trace(zero, 1000);
    double err = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k)
      err = std::max(err, std::abs(trace[k] - Complex(0.0, 2.0 * std::sqrt(static_cast<double>(k) / 1000.0))));
    out.push_back(exact_check("loewner_zero_trace", 1000, err, 1e-6, opt.seed));

    const double L = 1.7;
    std::vector<Complex> slit;
    for (int k = 0; k <= 64; ++k) slit.emplace_back(0.0, L * k / 64.0);
    out.push_back(exact_check("slit_capacity", 64, std::abs(capacity(slit) - L * L / 4.0), 1e-8, opt.seed));

    std::vector<double> ratios;
    for (int rep = 0; rep < 20; ++rep) {
      const DrivingFunction W = brownian_driver(rng, 1.0, 200);
      ratios.push_back(roundtrip_error(W, 1000) / roundtrip_error(W, 2000));
    }
    EnsembleSummary s = summarize_mean("roundtrip_order", ratios);
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    s.threshold = "every error ratio in [1.5, 3]; observed [" + fmt(*lo) + ", " + fmt(*hi) + "]";
    s.pass = *lo >= 1.5 && *hi <= 3.0;
    s.seed = opt.seed;
    out.push_back(s);
  }

  {
    double err = 0.0;
    FixedFrameOptions ffo;
    ffo.ds_max = 1e-4;
    for (int rep = 0; rep < 20; ++rep) err = std::max(err, fixed_frame_error(brownian_driver(rng, 1.0, 10000), ffo));
    out.push_back(exact_check("fixed_frame_roundtrip", 20, err, 5e-3, opt.seed));
    DrivingFunction zero;
    zero.t = {0.0, 1.0};
    zero.W = {0.0, 0.0};
    out.push_back(exact_check("fixed_frame_zero", 1, fixed_frame_error(zero, {}), 1e-8, opt.seed));
  }

  {
    const DomainPtr d = build_domain(triangular_lattice(), Rhombus{12, 12});
    const GaussianModel model(d, boundary_field(d, kLambdaTG, kLambdaTG));
    double err = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const Field x = model.sample(rng);
      const InterfacePath gamma = extract_interface(x);
      std::vector<VertexId> pinned(d->boundary().begin(), d->boundary().end());
      for (VertexId v : gamma.right_vertices)
        if (!d->is_boundary(v)) pinned.push_back(v);
      for (VertexId v : gamma.left_vertices)
        if (!d->is_boundary(v)) pinned.push_back(v);
      Field data = model.pinned_values();
      for (VertexId v : pinned) data[v] = x[v];
      const GaussianModel cond = conditional_model(model, pinned, data);
      const Field h = conditional_mean_given_interface(gamma, x);
      for (std::size_t v = 0; v < h.size(); ++v) err = std::max(err, std::abs(h.values[v] - cond.mean().values[v]));
    }
    out.push_back(exact_check("conditional_mean_harmonic", 20, err, 1e-10, opt.seed));
  }
  return out;
}

std::vector<EnsembleSummary> montecarlo_suite(const VerifyOptions& opt) {
  std::vector<EnsembleSummary> out;
  const std::size_t n = opt.ensemble_n ? opt.ensemble_n : 200000;
  {
    const DomainPtr d = build_domain(triangular_lattice(), Rhombus{2, 2});
    const GaussianModel model(d, boundary_field(d, 0.0, 0.0));
    const VertexId v = d->interior()[0];
    Rng rng = stream_rng(opt.seed, 2);
    std::vector<double> sq(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double h = model.sample(rng)[v];
      sq[k] = h * h;
    }
    EnsembleSummary s = summarize_mean("single_site_variance", sq);
    s.threshold = "|estimate - 1/6| <= 3 SE";
    s.pass = std::abs(s.estimate - 1.0 / 6.0) <= 3.0 * s.std_error;
    s.seed = opt.seed;
    out.push_back(s);
  }
  {
    const DomainPtr d = build_domain(triangular_lattice(), Rhombus{3, 5});
    const GaussianModel model(d, boundary_field(d, 0.3, -0.2));
    const auto free = model.system().free_vertices();
    Rng rng = stream_rng(opt.seed, 3);
    std::vector<Field> samples(n);
    for (auto& f : samples) f = model.sample(rng);
    double zmax = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < free.size(); ++i)
      for (std::size_t j = i; j < free.size(); ++j) {
        const VertexId u = free[i], v = free[j];
        std::vector<double> prod(n);
        for (std::size_t k = 0; k < n; ++k)
          prod[k] = (samples[k][u] - model.mean()[u]) * (samples[k][v] - model.mean()[v]);
        const EnsembleSummary c = summarize_mean("", prod);
        zmax = std::max(zmax, std::abs(c.estimate - model.covariance(u, v)) / c.std_error);
        ++pairs;
      }
    EnsembleSummary s;
    s.test_name = "small_domain_covariance";
    s.n = n;
    s.estimate = zmax;
    s.ci_low = s.ci_high = zmax;
    s.threshold = "max |z| over " + std::to_string(pairs) + " pairs <= 4";
    s.pass = zmax <= 4.0;
    s.seed = opt.seed;
    out.push_back(s);
  }
  return out;
}

std::vector<EnsembleSummary> sle_suite(const VerifyOptions& opt) {
  std::vector<EnsembleSummary> out;
  const std::size_t n = opt.ensemble_n ? opt.ensemble_n : 100000;
  for (double mult : {1.0, 3.0}) {
    const SleParams p = SleParams::from_heights(mult * kLambdaTG, mult * kLambdaTG);
    Rng rng = stream_rng(opt.seed, mult == 1.0 ? 4 : 5);
    constexpr double ds = 1e-3, spacing = 3.0, burn_in = 5.0;
    const auto every = static_cast<std::size_t>(std::llround(spacing / ds));
    const DiffusionPath path = simulate_Y(p, 0.0, burn_in + spacing * static_cast<double>(n), ds, 0.0, rng, every);
    const auto skip = static_cast<std::ptrdiff_t>(std::llround(burn_in / spacing));
    std::vector<double> ys(path.Y.begin() + skip + 1, path.Y.begin() + skip + 1 + static_cast<std::ptrdiff_t>(n));
    EnsembleSummary s = ks_test(ys, [&](double x) { return stationary_cdf(p, x); }, 0.01);
    s.test_name = mult == 1.0 ? "stationary_uniform" : "stationary_one_minus_x2";
    s.seed = opt.seed;
    out.push_back(s);
  }
  {
    const std::size_t m = opt.ensemble_n ? std::min<std::size_t>(opt.ensemble_n, 1000) : 1000;
    const SleParams p = SleParams::from_heights(kLambdaTG, kLambdaTG);
    const auto qv = parallel_map(
        m,
        [&](std::size_t k) {
          Rng rng = stream_rng(opt.seed ^ 0x51e, k);
          return quadratic_variation(sle_driving(p, 1.0, rng), 1.0);
        },
        opt.threads);
    EnsembleSummary s = summarize_mean("sle4_quadratic_variation", qv);
    s.threshold = "mean QV/T in [3.95, 4.05]";
    s.pass = s.estimate >= 3.95 && s.estimate <= 4.05;
    s.seed = opt.seed;
    out.push_back(s);
  }
  {
    const SleParams p = SleParams::from_heights(kLambdaTG, kLambdaTG);
    std::vector<std::vector<double>> S, Y;
    for (std::size_t k = 0; k < 4; ++k) {
      Rng rng = stream_rng(opt.seed ^ 0xd1f, k);
      DiffusionPath path = simulate_Y(p, 0.0, 8.0, 1e-4, Stationary{}, rng);
      S.push_back(std::move(path.s));
      Y.push_back(std::move(path.Y));
    }
    MomentWindowRule rule;
    rule.delta = 0.05;
    auto r = diffusion_moment_test(S, Y, p, rule);
    for (EnsembleSummary* s : {&r.drift, &r.variance}) {
      s->test_name = "synthetic_" + s->test_name;
      s->threshold = "|mean| <= 3 SE over " + std::to_string(s->n) + " windows";
      s->pass = std::abs(s->estimate) <= 3.0 * s->std_error && s->n >= 10000;
      s->seed = opt.seed;
      out.push_back(*s);
    }
  }
  return out;
}

std::vector<EnsembleSummary> gap_suite(const VerifyOptions& opt) {
  const std::size_t n = opt.ensemble_n ? opt.ensemble_n : 200;
  const DomainPtr d = build_domain(triangular_lattice(), Rhombus{90, 90});
  auto ens = interface_ensemble(d, kLambdaTG, kLambdaTG, n, opt.seed, opt.threads);
  std::vector<Field> fields;
  std::vector<InterfacePath> paths;
  for (auto& fi : ens) {
    fields.push_back(std::move(fi.field));
    paths.push_back(std::move(fi.gamma));
  }
  const GapProfile g = height_gap_profile(fields, paths, 10, 5, 10);
  EnsembleSummary right = g.right_band;
  right.threshold = "right-band mean in [0.33, 0.62]";
  right.pass = right.estimate >= 0.33 && right.estimate <= 0.62;
  right.seed = opt.seed;
  EnsembleSummary left = g.left_band;
  const double se = std::hypot(right.std_error, left.std_error);
  left.threshold = "|left - right| <= 3 SE (" + fmt(3.0 * se) + ")";
  left.pass = std::abs(left.estimate - right.estimate) <= 3.0 * se;
  left.seed = opt.seed;
  return {right, left};
}

std::vector<EnsembleSummary> driving_suite(const VerifyOptions& opt) {
  const std::size_t n = opt.ensemble_n ? opt.ensemble_n : 300;
  if (n < 50) throw std::invalid_argument("the driving suite needs ensemble_n >= 50");
  constexpr double T = 1.0;
  constexpr std::size_t grid = 10;
  std::vector<EnsembleSummary> out;

  const DomainPtr tg = build_domain(triangular_lattice(), HalfDisc{opt.radius});
  const auto Ws = driving_ensemble(tg, kLambdaTG, kLambdaTG, n, opt.seed, T, opt.threads);
  std::vector<double> qv, end;
  for (const auto& W : Ws) {
    qv.push_back(quadratic_variation(W, T, grid));
    end.push_back(W.at(T));
  }
  EnsembleSummary k = summarize_mean("dgff_kappa_estimate", qv);
  k.threshold = "kappa estimate in [3.2, 4.8]";
  k.pass = k.estimate >= 3.2 && k.estimate <= 4.8;
  k.seed = opt.seed;
  out.push_back(k);
  EnsembleSummary w = summarize_mean("dgff_mean_drift", end);
  w.threshold = "|mean W_T| <= 3 SE";
  w.pass = std::abs(w.estimate) <= 3.0 * w.std_error;
  w.seed = opt.seed;
  out.push_back(w);

  {
    std::vector<std::vector<double>> S, Y;
    for (const auto& W : Ws) {
      FixedFramePath ff = to_fixed_frame(W);
      S.push_back(std::move(ff.s));
      Y.push_back(std::move(ff.Y));
    }
    MomentWindowRule rule;
    rule.delta = 0.05;
    rule.s_lo = -1.0;
    rule.s_hi = 1.0;
    rule.C = 5.0;
    auto r = diffusion_moment_test(S, Y, SleParams::from_heights(kLambdaTG, kLambdaTG), rule);
    for (EnsembleSummary* s : {&r.drift, &r.variance}) {
      s->test_name = "dgff_" + s->test_name;
      s->seed = opt.seed;
      out.push_back(*s);
    }
  }

  std::vector<EnsembleSummary> lat;
  for (const char* name : {"square-ne", "square-nw"}) {
    const DomainPtr d = build_domain(lattice_by_name(name), HalfDisc{opt.radius});
    const auto Wl = driving_ensemble(d, kLambdaGFF, kLambdaGFF, n, opt.seed, T, opt.threads);
    std::vector<double> q;
    for (const auto& W : Wl) q.push_back(quadratic_variation(W, T, grid));
    lat.push_back(summarize_mean(std::string("kappa_") + name, q));
  }
  EnsembleSummary inv;
  inv.test_name = "lattice_invariance";
  inv.n = lat[0].n + lat[1].n;
  inv.estimate = lat[0].estimate - lat[1].estimate;
  inv.std_error = std::hypot(lat[0].std_error, lat[1].std_error);
  inv.ci_low = inv.estimate - 1.96 * inv.std_error;
  inv.ci_high = inv.estimate + 1.96 * inv.std_error;
  inv.threshold = "95% intervals overlap: ne " + fmt(lat[0].estimate) + " +- " + fmt(1.96 * lat[0].std_error) +
                  ", nw " + fmt(lat[1].estimate) + " +- " + fmt(1.96 * lat[1].std_error);
  inv.pass = lat[0].ci_low <= lat[1].ci_high && lat[1].ci_low <= lat[0].ci_high;
  inv.seed = opt.seed;
  out.push_back(inv);
  return out;
}

}  // namespace

std::vector<std::string> suite_names() { return {"exact", "montecarlo", "sle", "gap", "driving"}; }

std::vector<EnsembleSummary> run_suite(std::string_view suite, const VerifyOptions& opt) {
  if (suite == "exact") return exact_suite(opt);
  if (suite == "montecarlo") return montecarlo_suite(opt);
  if (suite == "sle") return sle_suite(opt);
  if (suite == "gap") return gap_suite(opt);
  if (suite == "driving") return driving_suite(opt);
  throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
}

}  // namespace dgff
