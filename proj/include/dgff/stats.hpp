#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dgff/interface.hpp"
#include "dgff/loewner.hpp"
#include "dgff/rng.hpp"
#include "dgff/sle.hpp"

namespace dgff {

struct EnsembleSummary {
  std::string test_name;
  std::size_t n = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = kNaN;
  std::string threshold;
  bool pass = false;
  std::uint64_t seed = 0;
};

/// Mean, standard error and normal 95% interval of the values.
EnsembleSummary summarize_mean(std::string name, std::span<const double> values);

/// Sum of squared increments over [0, T], divided by T. With grid > 0 the
/// driving function is first sampled at `grid` uniform times.
double quadratic_variation(const DrivingFunction& W, double T, std::size_t grid = 0);

struct MomentWindowRule {
  double delta = 0.05;
  /// Windows are drawn from the part of each path inside [s_lo, s_hi].
  double s_lo = -std::numeric_limits<double>::infinity();
  double s_hi = std::numeric_limits<double>::infinity();
  /// Tolerance constant for |mean residual| <= max(C delta^3, 3 SE).
  double C = 5.0;
};

struct MomentTestResult {
  EnsembleSummary drift;     // mean of dY - q2(Y0) ds
  EnsembleSummary variance;  // mean of dY^2 - q1(Y0) ds
};

/// Consecutive windows end at the first sample where the elapsed s reaches
/// delta^2 or |Y - Y_start| reaches delta.
MomentTestResult diffusion_moment_test(std::span<const std::vector<double>> s_paths,
                                       std::span<const std::vector<double>> y_paths, const SleParams& params,
                                       const MomentWindowRule& rule);

struct GapBucket {
  int distance = 0;
  std::size_t fields = 0;  // fields contributing to the bucket
  double right_mean = 0.0;
  double right_se = 0.0;
  double left_mean = 0.0;  // sign-reflected
  double left_se = 0.0;
};

struct GapProfile {
  std::vector<GapBucket> buckets;
  std::vector<int> empty_buckets;
  EnsembleSummary right_band;
  EnsembleSummary left_band;
};

/// Lattice distance of every vertex from the side vertices of gamma
/// (distance 1), without crossing gamma; -1 where unreachable.
std::vector<int> side_distance(const InterfacePath& gamma, bool right_side);

/// Per-field mean height at each distance from gamma (left side reflected),
/// averaged over fields. Only interior vertices contribute.
GapProfile height_gap_profile(std::span<const Field> fields, std::span<const InterfacePath> paths, int d_max,
                              int band_lo, int band_hi);

using PointMetric = std::function<double(Complex, Complex)>;
double euclidean(Complex a, Complex b);
double discrete_frechet(std::span<const Complex> p, std::span<const Complex> q, const PointMetric& metric = euclidean);

/// Asymptotic Kolmogorov distribution tail P(K > x).
double kolmogorov_tail(double x);

/// One-sample KS test; estimate = statistic D, pass iff p > alpha.
EnsembleSummary ks_test(std::span<const double> samples, const std::function<double(double)>& cdf,
                        double alpha = 0.01);
EnsembleSummary ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.01);

/// Energy-distance permutation test between two samples of vectors.
/// Returns the p-value.
double energy_distance_test(const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
                            int permutations, Rng& rng);

}  // namespace dgff
