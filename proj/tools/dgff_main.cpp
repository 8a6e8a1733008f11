#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgff/io.hpp"
#include "dgff/pipeline.hpp"
#include "dgff/sle.hpp"
#include "dgff/stats.hpp"
#include "dgff/verify.hpp"

namespace fs = std::filesystem;
using namespace dgff;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  DomainConfig domain;
  double a = kNaN;
  double b = kNaN;
  std::uint64_t seed = 1;
  std::size_t ensemble_n = 1;
  unsigned threads = 0;
  std::string out = ".";
  bool svg = false;
  bool ensemble_n_given = false;

  // subcommand parameters
  std::string field_path;
  double T = 1.0;
  double ds = 1e-4;
  double s_min = -12.0;
  double kappa = 4.0;
  std::size_t trace_points = 0;
  std::string suite;
  int d_max = 12;
  int band_lo = 5;
  int band_hi = 10;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything that affects results; the output directory and thread count do not.
std::string canonical(const RunConfig& c, const std::string& command) {
  std::ostringstream os;
  os.precision(17);
  os << "command=" << command << "\nlattice=" << c.domain.lattice << "\nshape=" << c.domain.shape
     << "\nm=" << c.domain.m << "\nn=" << c.domain.n << "\nradius=" << c.domain.radius << "\na=" << c.a
     << "\nb=" << c.b << "\nseed=" << c.seed << "\nensemble_n=" << c.ensemble_n << "\nT=" << c.T
     << "\nds=" << c.ds << "\ns_min=" << c.s_min << "\nkappa=" << c.kappa << "\ntrace_points=" << c.trace_points
     << "\nsuite=" << c.suite << "\nd_max=" << c.d_max << "\nband=" << c.band_lo << ',' << c.band_hi << '\n';
  return os.str();
}

double lattice_lambda(const std::string& lattice) { return lattice == "tg" ? kLambdaTG : kLambdaGFF; }

void resolve_heights(RunConfig& cfg) {
  if (std::isnan(cfg.a)) cfg.a = lattice_lambda(cfg.domain.lattice);
  if (std::isnan(cfg.b)) cfg.b = lattice_lambda(cfg.domain.lattice);
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  const fs::path p = fs::path(cfg.out) / name;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  std::cerr << "wrote " << p.string() << '\n';
  return os;
}

std::string indexed(const std::string& stem, std::size_t k, std::size_t n, const std::string& ext) {
  if (n == 1) return stem + ext;
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%04zu", k);
  return stem + buf + ext;
}

int write_summaries(const RunConfig& cfg, const std::string& name, const std::vector<EnsembleSummary>& s) {
  const std::string json = summaries_json(s);
  std::cout << json << '\n';
  open_out(cfg, name) << json << '\n';
  for (const auto& x : s)
    if (!x.pass) return kExitFail;
  return 0;
}

int cmd_sample(const RunConfig& cfg, const FileStamp& stamp) {
  const DomainPtr d = make_domain(cfg.domain);
  const GaussianModel model(d, boundary_field(d, cfg.a, cfg.b));
  for (std::size_t k = 0; k < cfg.ensemble_n; ++k) {
    Rng rng = stream_rng(cfg.seed, k);
    const Field f = model.sample(rng);
    auto os = open_out(cfg, indexed("field", k, cfg.ensemble_n, ".csv"));
    write_field_csv(os, f, stamp);
    if (cfg.svg) {
      auto svg = open_out(cfg, indexed("field", k, cfg.ensemble_n, ".svg"));
      write_field_svg(svg, f);
    }
  }
  return 0;
}

int cmd_interface(const RunConfig& cfg, const FileStamp& stamp) {
  const DomainPtr d = make_domain(cfg.domain);
  std::ifstream is(cfg.field_path);
  if (!is) throw UsageError("cannot read field file '" + cfg.field_path + "'");
  const Field f = read_field_csv(is, d);
  const InterfacePath gamma = extract_interface(f);
  if (gamma.points.front() != d->x_point() || gamma.points.back() != d->y_point())
    throw std::logic_error("interface does not join the two boundary marks");
  std::cerr << "interface joins x and y through " << gamma.edges.size() << " lattice edges\n";
  {
    auto os = open_out(cfg, "interface.csv");
    write_interface_csv(os, gamma.points, stamp);
  }
  std::vector<std::vector<Complex>> curves{gamma.points};
  if (cfg.a == 0.0 && cfg.b == 0.0) {
    const auto arcs = extract_all_zero_interfaces(f);
    auto os = open_out(cfg, "zero_arcs.csv");
    write_zero_arcs_csv(os, arcs, stamp);
    curves.clear();
    for (const auto& arc : arcs) curves.push_back(arc.points);
    std::cerr << arcs.size() << " boundary-to-boundary zero arcs\n";
  }
  if (cfg.svg) {
    auto os = open_out(cfg, "interface.svg");
    write_field_svg(os, f, curves);
  }
  return 0;
}

int cmd_driving(const RunConfig& cfg, const FileStamp& stamp) {
  if (cfg.domain.shape != "half-disc") throw UsageError("driving needs shape = half-disc");
  const DomainPtr d = make_domain(cfg.domain);
  const auto Ws = driving_ensemble(d, cfg.a, cfg.b, cfg.ensemble_n, cfg.seed, cfg.T, cfg.threads);
  std::vector<double> qv, end;
  for (std::size_t k = 0; k < Ws.size(); ++k) {
    auto os = open_out(cfg, indexed("driving", k, Ws.size(), ".csv"));
    write_driving_csv(os, Ws[k], stamp);
    const FixedFramePath ff = to_fixed_frame(Ws[k], {cfg.s_min, 1e-3});
    auto fs_os = open_out(cfg, indexed("fixed_frame", k, Ws.size(), ".csv"));
    write_fixed_frame_csv(fs_os, ff.s, ff.Y, stamp);
    qv.push_back(quadratic_variation(Ws[k], cfg.T, 10));
    end.push_back(Ws[k].at(cfg.T));
  }
  EnsembleSummary k = summarize_mean("kappa_estimate", qv);
  k.threshold = "reported";
  k.pass = true;
  EnsembleSummary w = summarize_mean("mean_W_T", end);
  w.threshold = "reported";
  w.pass = true;
  k.seed = w.seed = cfg.seed;
  return write_summaries(cfg, "driving_summary.json", {k, w});
}

int cmd_sle(const RunConfig& cfg, const FileStamp& stamp) {
  SleParams p = SleParams::from_heights(cfg.a, cfg.b, lattice_lambda(cfg.domain.lattice), cfg.kappa);
  SleDrivingOptions opt{cfg.ds, cfg.s_min};
  std::vector<double> qv;
  for (std::size_t k = 0; k < cfg.ensemble_n; ++k) {
    Rng rng = stream_rng(cfg.seed, k);
    const DrivingFunction W = sle_driving(p, cfg.T, rng, opt);
    auto os = open_out(cfg, indexed("sle_driving", k, cfg.ensemble_n, ".csv"));
    write_driving_csv(os, W, stamp);
    if (cfg.trace_points > 0) {
      auto ts = open_out(cfg, indexed("sle_trace", k, cfg.ensemble_n, ".csv"));
      write_interface_csv(ts, solve_trace(W, cfg.trace_points), stamp);
    }
    qv.push_back(quadratic_variation(W, cfg.T));
  }
  EnsembleSummary s = summarize_mean("quadratic_variation", qv);
  s.threshold = "reported";
  s.pass = true;
  s.seed = cfg.seed;
  return write_summaries(cfg, "sle_summary.json", {s});
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.ensemble_n = cfg.ensemble_n_given ? cfg.ensemble_n : 0;
  opt.radius = cfg.domain.radius;
  opt.threads = cfg.threads;
  std::vector<EnsembleSummary> s;
  try {
    s = run_suite(cfg.suite, opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return write_summaries(cfg, "verify_" + cfg.suite + ".json", s);
}

int cmd_gap(const RunConfig& cfg, const FileStamp& stamp) {
  const DomainPtr d = make_domain(cfg.domain);
  auto ens = interface_ensemble(d, cfg.a, cfg.b, cfg.ensemble_n, cfg.seed, cfg.threads);
  std::vector<Field> fields;
  std::vector<InterfacePath> paths;
  for (auto& fi : ens) {
    fields.push_back(std::move(fi.field));
    paths.push_back(std::move(fi.gamma));
  }
  GapProfile g = height_gap_profile(fields, paths, cfg.d_max, cfg.band_lo, cfg.band_hi);
  {
    auto os = open_out(cfg, "gap.csv");
    write_stamp(os, "gap", stamp);
    os << "distance,fields,right_mean,right_se,left_mean,left_se\n";
    os.precision(17);
    for (const auto& b : g.buckets)
      os << b.distance << ',' << b.fields << ',' << b.right_mean << ',' << b.right_se << ',' << b.left_mean << ','
         << b.left_se << '\n';
  }
  for (int e : g.empty_buckets) std::cerr << "distance " << e << " has no samples\n";
  g.right_band.threshold = g.left_band.threshold = "reported";
  g.right_band.pass = g.left_band.pass = true;
  g.right_band.seed = g.left_band.seed = cfg.seed;
  return write_summaries(cfg, "gap_summary.json", {g.right_band, g.left_band});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Gaussian free field level lines and their Loewner driving functions"};
  app.set_config("--config", "", "TOML configuration file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  RunConfig cfg;

  app.add_option("--lattice", cfg.domain.lattice, "tg | square-ne | square-nw")
      ->check(CLI::IsMember({"tg", "square-ne", "square-nw"}))
      ->capture_default_str();
  app.add_option("--shape", cfg.domain.shape, "rhombus | rectangle | half-disc")
      ->check(CLI::IsMember({"rhombus", "rectangle", "half-disc"}))
      ->capture_default_str();
  app.add_option("--m", cfg.domain.m, "rhombus/rectangle width")->capture_default_str();
  app.add_option("--n", cfg.domain.n, "rhombus/rectangle height")->capture_default_str();
  app.add_option("--radius", cfg.domain.radius, "half-disc radius")->capture_default_str();
  app.add_option("--a", cfg.a, "minus-arc height is -a (default: lattice gap)");
  app.add_option("--b", cfg.b, "plus-arc height (default: lattice gap)");
  app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  auto* ensemble_opt = app.add_option("--ensemble-n", cfg.ensemble_n, "number of samples")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads, 0 = hardware")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_flag("--svg", cfg.svg, "also write SVG renderings");

  auto* sample = app.add_subcommand("sample", "sample DGFF fields");
  auto* interface = app.add_subcommand("interface", "extract the zero-height interface of a field file");
  interface->add_option("--field", cfg.field_path, "field CSV written by `sample`")->required();
  auto* driving = app.add_subcommand("driving", "driving functions of DGFF interfaces in a half-disc");
  driving->add_option("--T", cfg.T, "capacity horizon")->capture_default_str();
  driving->add_option("--s-min", cfg.s_min, "first fixed-frame time")->capture_default_str();
  auto* sle = app.add_subcommand("sle", "SLE(kappa; rho1, rho2) driving functions");
  sle->add_option("--T", cfg.T, "capacity horizon")->capture_default_str();
  sle->add_option("--ds", cfg.ds, "fixed-frame Euler step")->capture_default_str();
  sle->add_option("--s-min", cfg.s_min, "first fixed-frame time")->capture_default_str();
  sle->add_option("--kappa", cfg.kappa)->capture_default_str();
  sle->add_option("--trace-points", cfg.trace_points, "also write a trace with this many points");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", cfg.suite, "exact | montecarlo | sle | gap | driving")->required();
  auto* gap = app.add_subcommand("gap", "height profile beside the interface");
  gap->add_option("--d-max", cfg.d_max)->capture_default_str();
  gap->add_option("--band-lo", cfg.band_lo)->capture_default_str();
  gap->add_option("--band-hi", cfg.band_hi)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    cfg.ensemble_n_given = ensemble_opt->count() > 0;
    if (cfg.ensemble_n == 0) throw UsageError("ensemble_n must be positive");
    resolve_heights(cfg);
    FileStamp stamp;
    stamp.config_hash = hex64(fnv1a(canonical(cfg, app.get_subcommands().front()->get_name())));
    stamp.seed = cfg.seed;
    if (*sample) return cmd_sample(cfg, stamp);
    if (*interface) return cmd_interface(cfg, stamp);
    if (*driving) return cmd_driving(cfg, stamp);
    if (*sle) return cmd_sle(cfg, stamp);
    if (*verify) return cmd_verify(cfg);
    if (*gap) return cmd_gap(cfg, stamp);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
