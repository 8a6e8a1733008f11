#include "dgff/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace dgff {

EnsembleSummary summarize_mean(std::string name, std::span<const double> values) {
  EnsembleSummary s;
  s.test_name = std::move(name);
  s.n = values.size();
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  s.estimate = mean;
  s.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  s.ci_low = mean - 1.96 * s.std_error;
  s.ci_high = mean + 1.96 * s.std_error;
  return s;
}

double quadratic_variation(const DrivingFunction& W, double T, std::size_t grid) {
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  if (W.t.empty() || T > W.horizon() * (1.0 + 1e-12)) throw std::invalid_argument("T lies beyond the driving data");
  double qv = 0.0;
  if (grid > 0) {
    double prev = W.at(0.0);
    for (std::size_t k = 1; k <= grid; ++k) {
      const double cur = W.at(T * static_cast<double>(k) / static_cast<double>(grid));
      qv += (cur - prev) * (cur - prev);
      prev = cur;
    }
    return qv / T;
  }
  double prev = W.W[0];
  for (std::size_t k = 1; k < W.t.size() && W.t[k] < T; ++k) {
    qv += (W.W[k] - prev) * (W.W[k] - prev);
    prev = W.W[k];
  }
  const double end = W.at(T);
  qv += (end - prev) * (end - prev);
  return qv / T;
}

MomentTestResult diffusion_moment_test(std::span<const std::vector<double>> s_paths,
                                       std::span<const std::vector<double>> y_paths, const SleParams& params,
                                       const MomentWindowRule& rule) {
  if (!(rule.delta > 0.0 && rule.delta <= 0.25)) throw std::invalid_argument("delta must lie in (0, 1/4]");
  if (s_paths.size() != y_paths.size()) throw std::invalid_argument("s and Y path counts differ");
  const double d2 = rule.delta * rule.delta;
  std::vector<double> r1, r2;
  for (std::size_t p = 0; p < s_paths.size(); ++p) {
    const auto& s = s_paths[p];
    const auto& y = y_paths[p];
    std::size_t i = 0;
    while (i < s.size() && s[i] < rule.s_lo) ++i;
    while (i + 1 < s.size() && s[i] <= rule.s_hi) {
      std::size_t j = i + 1;
      while (j < s.size() && s[j] - s[i] < d2 && std::abs(y[j] - y[i]) < rule.delta) ++j;
      if (j >= s.size() || s[j] > rule.s_hi) break;
      const double dy = y[j] - y[i], ds = s[j] - s[i];
      const auto [q2, q1] = drift_and_diffusion(params, y[i]);
      r1.push_back(dy - q2 * ds);
      r2.push_back(dy * dy - q1 * ds);
      i = j;
    }
  }
  if (r1.empty()) throw std::invalid_argument("no complete moment windows");
  const double bound = rule.C * rule.delta * rule.delta * rule.delta;
  MomentTestResult out{summarize_mean("drift_residual", r1), summarize_mean("variance_residual", r2)};
  for (auto* s : {&out.drift, &out.variance}) {
    const double thr = std::max(bound, 3.0 * s->std_error);
    s->threshold = "|mean| <= max(C delta^3, 3 SE) = " + std::to_string(thr);
    s->pass = std::abs(s->estimate) <= thr;
  }
  return out;
}

std::vector<int> side_distance(const InterfacePath& gamma, bool right_side) {
  const GridDomain& d = *gamma.domain;
  std::vector<char> blocked(d.edges().size(), 0);
  for (EdgeId e : gamma.edges) blocked[static_cast<std::size_t>(e)] = 1;
  std::vector<int> dist(d.vertex_count(), -1);
  std::deque<VertexId> queue;
  for (VertexId v : right_side ? gamma.right_vertices : gamma.left_vertices) {
    dist[static_cast<std::size_t>(v)] = 1;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (const auto& nb : d.neighbors(v)) {
      if (blocked[static_cast<std::size_t>(nb.edge)] || dist[static_cast<std::size_t>(nb.vertex)] >= 0) continue;
      dist[static_cast<std::size_t>(nb.vertex)] = dist[static_cast<std::size_t>(v)] + 1;
      queue.push_back(nb.vertex);
    }
  }
  return dist;
}

GapProfile height_gap_profile(std::span<const Field> fields, std::span<const InterfacePath> paths, int d_max,
                              int band_lo, int band_hi) {
  if (fields.size() != paths.size()) throw std::invalid_argument("fields and paths differ in number");
  if (d_max < 1) throw std::invalid_argument("d_max must be at least 1");
  std::vector<std::vector<double>> right(static_cast<std::size_t>(d_max) + 1), left(static_cast<std::size_t>(d_max) + 1);
  std::vector<double> right_band, left_band;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const Field& f = fields[k];
    const GridDomain& d = *f.domain;
    for (int side = 0; side < 2; ++side) {
      const bool is_right = side == 0;
      const auto dist = side_distance(paths[k], is_right);
      const double sgn = is_right ? 1.0 : -1.0;
      std::vector<double> sum(static_cast<std::size_t>(d_max) + 1, 0.0), cnt(sum.size(), 0.0);
      double band_sum = 0.0, band_cnt = 0.0;
      for (VertexId v : d.interior()) {
        const int dv = dist[static_cast<std::size_t>(v)];
        if (dv < 1) continue;
        if (dv <= d_max) {
          sum[static_cast<std::size_t>(dv)] += sgn * f[v];
          cnt[static_cast<std::size_t>(dv)] += 1.0;
        }
        if (dv >= band_lo && dv <= band_hi) {
          band_sum += sgn * f[v];
          band_cnt += 1.0;
        }
      }
      auto& target = is_right ? right : left;
      for (int q = 1; q <= d_max; ++q)
        if (cnt[static_cast<std::size_t>(q)] > 0.0)
          target[static_cast<std::size_t>(q)].push_back(sum[static_cast<std::size_t>(q)] / cnt[static_cast<std::size_t>(q)]);
      if (band_cnt > 0.0) (is_right ? right_band : left_band).push_back(band_sum / band_cnt);
    }
  }
  GapProfile out;
  for (int q = 1; q <= d_max; ++q) {
    const auto& r = right[static_cast<std::size_t>(q)];
    const auto& l = left[static_cast<std::size_t>(q)];
    if (r.empty() && l.empty()) {
      out.empty_buckets.push_back(q);
      continue;
    }
    const auto sr = summarize_mean("", r), sl = summarize_mean("", l);
    out.buckets.push_back({q, std::max(r.size(), l.size()), sr.estimate, sr.std_error, sl.estimate, sl.std_error});
  }
  out.right_band = summarize_mean("height_gap_right", right_band);
  out.left_band = summarize_mean("height_gap_left", left_band);
  return out;
}

double euclidean(Complex a, Complex b) { return std::abs(a - b); }

double discrete_frechet(std::span<const Complex> p, std::span<const Complex> q, const PointMetric& metric) {
  if (p.empty() || q.empty()) throw std::invalid_argument("discrete Frechet distance needs nonempty sequences");
  std::vector<double> prev(q.size()), cur(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double c = metric(p[i], q[j]);
      if (i == 0 && j == 0) cur[j] = c;
      else if (i == 0) cur[j] = std::max(cur[j - 1], c);
      else if (j == 0) cur[j] = std::max(prev[0], c);
      else cur[j] = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), c);
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // P(K <= x) = sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2))
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * pi2 / (8.0 * x * x));
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

EnsembleSummary ks_test(std::span<const double> samples, const std::function<double(double)>& cdf, double alpha) {
  if (samples.size() < 50) throw std::invalid_argument("KS test needs at least 50 samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double D = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    D = std::max({D, (static_cast<double>(i) + 1.0) / n - F, F - static_cast<double>(i) / n});
  }
  EnsembleSummary s;
  s.test_name = "ks_one_sample";
  s.n = x.size();
  s.estimate = D;
  s.ci_low = s.ci_high = D;
  const double sn = std::sqrt(n);
  s.p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * D);
  s.threshold = "p > " + std::to_string(alpha);
  s.pass = s.p_value > alpha;
  return s;
}

EnsembleSummary ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < 50 || b.size() < 50) throw std::invalid_argument("KS test needs at least 50 samples per side");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double D = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    D = std::max(D, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  EnsembleSummary s;
  s.test_name = "ks_two_sample";
  s.n = x.size() + y.size();
  s.estimate = D;
  s.ci_low = s.ci_high = D;
  const double ne = std::sqrt(n * m / (n + m));
  s.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * D);
  s.threshold = "p > " + std::to_string(alpha);
  s.pass = s.p_value > alpha;
  return s;
}

double energy_distance_test(const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
                            int permutations, Rng& rng) {
  if (x.empty() || y.empty()) throw std::invalid_argument("energy test needs nonempty samples");
  const std::size_t n = x.size(), N = x.size() + y.size();
  std::vector<const std::vector<double>*> z;
  for (const auto& v : x) z.push_back(&v);
  for (const auto& v : y) z.push_back(&v);
  std::vector<float> dist(N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < z[i]->size(); ++k) s += ((*z[i])[k] - (*z[j])[k]) * ((*z[i])[k] - (*z[j])[k]);
      dist[i * N + j] = dist[j * N + i] = static_cast<float>(std::sqrt(s));
    }
  auto statistic = [&](const std::vector<std::size_t>& label_perm) {
    // first n entries of the permutation form sample x
    std::vector<char> in_x(N, 0);
    for (std::size_t q = 0; q < n; ++q) in_x[label_perm[q]] = 1;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const float* row = &dist[i * N];
      double rx = 0.0, ry = 0.0;
      for (std::size_t j = 0; j < N; ++j) (in_x[j] ? rx : ry) += row[j];
      if (in_x[i]) {
        sxx += rx;
        sxy += ry;
      } else {
        syy += ry;
      }
    }
    const double m = static_cast<double>(N - n), nn = static_cast<double>(n);
    return 2.0 * sxy / (nn * m) - sxx / (nn * nn) - syy / (m * m);
  };
  std::vector<std::size_t> perm(N);
  std::iota(perm.begin(), perm.end(), 0);
  const double observed = statistic(perm);
  int exceed = 0;
  for (int r = 0; r < permutations; ++r) {
    std::shuffle(perm.begin(), perm.end(), rng);
    if (statistic(perm) >= observed) ++exceed;
  }
  return (exceed + 1.0) / (permutations + 1.0);
}

}  // namespace dgff
