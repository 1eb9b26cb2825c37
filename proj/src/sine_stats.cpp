#include "sine_stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "error.hpp"
#include "special.hpp"

namespace xilimit {

namespace {

using Complex = std::complex<double>;

// Smallest k in [lo, hi] with y_k >= t (hi + 1 if none).
long long first_at_least(const RescaledPointSet& p, double t, long long lo, long long hi) {
  long long a = lo, b = hi + 1;
  while (a < b) {
    const long long mid = a + (b - a) / 2;
    if (p(mid) >= t) b = mid; else a = mid + 1;
  }
  return a;
}

// Smallest k in [lo, hi] with y_k > t (hi + 1 if none).
long long first_above(const RescaledPointSet& p, double t, long long lo, long long hi) {
  long long a = lo, b = hi + 1;
  while (a < b) {
    const long long mid = a + (b - a) / 2;
    if (p(mid) > t) b = mid; else a = mid + 1;
  }
  return a;
}

double factorial(int a) {
  double f = 1.0;
  for (int i = 2; i <= a; ++i) f *= i;
  return f;
}

double sinc(double u) {
  if (u == 0.0) return 1.0;
  const double pu = M_PI * u;
  return std::sin(pu) / pu;
}

// integral over [lo, hi] of f by composite Simpson with `m` (even) panels.
template <class F>
double simpson(F f, double lo, double hi, int m) {
  const double h = (hi - lo) / m;
  double s = f(lo) + f(hi);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return s * h / 3.0;
}

}  // namespace

long long count_in_interval(const RescaledPointSet& points, double a, double b) {
  if (a > b) fail(ErrorCode::InvalidArgument, "count_in_interval needs a <= b");
  const long long k = points.window();
  if (a < points(-k) || b > points(k))
    fail(ErrorCode::WindowTooSmall, "interval extends beyond the materialized window");
  return first_above(points, b, -k, k) - first_at_least(points, a, -k, k);
}

CountStatistics variance_profile(std::span<const Spectrum> ensemble, std::span<const double> lengths,
                                 std::size_t arcs_per_replica) {
  if (ensemble.size() < kMinVarianceReplicas)
    fail(ErrorCode::InsufficientReplicas, "variance_profile needs >= " +
                                              std::to_string(kMinVarianceReplicas) + " replicas, got " +
                                              std::to_string(ensemble.size()));
  if (lengths.size() < 2) fail(ErrorCode::InvalidArgument, "variance_profile needs >= 2 lengths");
  if (arcs_per_replica < 1) fail(ErrorCode::InvalidArgument, "need at least one arc per replica");
  const Eigen::Index n = ensemble.front().size();
  const double a_max = *std::max_element(lengths.begin(), lengths.end());
  if (a_max > static_cast<double>(n) / 8.0)
    fail(ErrorCode::InvalidArgument, "A_max must be <= n/8");

  CountStatistics st;
  st.lengths.assign(lengths.begin(), lengths.end());
  st.replicas = ensemble.size();
  st.arcs_per_replica = arcs_per_replica;
  const std::size_t m = lengths.size();
  std::vector<std::vector<double>> second_moment(m, std::vector<double>(ensemble.size()));
  std::vector<CompensatedSum> count_sum(m);

  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    const Spectrum& spec = ensemble[r];
    if (spec.size() != n) fail(ErrorCode::InvalidArgument, "ensemble mixes dimensions");
    const RescaledPointSet pts = rescaled_points(spec, 2 * n);
    std::vector<long long> origin_counts(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double len = lengths[i];
      double acc = 0.0;
      for (std::size_t o = 0; o < arcs_per_replica; ++o) {
        const double start = static_cast<double>(n) * static_cast<double>(o) /
                             static_cast<double>(arcs_per_replica);
        const long long c = count_in_interval(pts, start, start + len);
        if (o == 0) origin_counts[i] = c;
        const double dev = static_cast<double>(c) - len;
        acc += dev * dev;
        count_sum[i].add(static_cast<double>(c));
      }
      second_moment[i][r] = acc / static_cast<double>(arcs_per_replica);
    }
    st.counts.push_back(std::move(origin_counts));
  }

  std::vector<double> log_a, weights;
  for (std::size_t i = 0; i < m; ++i) {
    const SampleMoments mom = moments(second_moment[i]);
    st.mean.push_back(count_sum[i].value() /
                      static_cast<double>(ensemble.size() * arcs_per_replica));
    st.variance.push_back(mom.mean);
    st.stderr_var.push_back(mom.stderr_mean);
    log_a.push_back(std::log(lengths[i]));
    weights.push_back(mom.stderr_mean > 0 ? 1.0 / (mom.stderr_mean * mom.stderr_mean) : 1.0);
  }
  const LinearFit fit = fit_line(log_a, st.variance, weights);
  st.slope = fit.slope;
  st.slope_lo = fit.slope_lo;
  st.slope_hi = fit.slope_hi;
  st.intercept = fit.intercept;
  return st;
}

double deviation_profile(const RescaledPointSet& points, long long window) {
  if (window < 1 || window > points.window())
    fail(ErrorCode::WindowTooSmall, "deviation window exceeds the point window");
  double worst = 0.0;
  for (long long k = 1; k <= window; ++k) {
    const double denom = std::log(2.0 + static_cast<double>(k));
    worst = std::max(worst, std::abs(points(k) - static_cast<double>(k)) / denom);
    worst = std::max(worst, std::abs(points(-k) + static_cast<double>(k)) / denom);
  }
  return worst;
}

CouplingProfile coupling_error_profile(const Spectrum& spec_n, const Spectrum& spec_N,
                                       long long window, double eps) {
  if (!spec_n.provenance() || !spec_N.provenance() || !(*spec_n.provenance() == *spec_N.provenance()))
    fail(ErrorCode::NotCoupled, "spectra do not come from the same coupled chain");
  const double n = static_cast<double>(spec_n.size());
  if (window < 0 || static_cast<double>(window) > std::pow(n, 0.25))
    fail(ErrorCode::InvalidArgument, "coupling window must satisfy K <= n^{1/4}");
  const RescaledPointSet small = rescaled_points(spec_n, std::max<long long>(window, 1));
  const RescaledPointSet large = rescaled_points(spec_N, std::max<long long>(window, 1));
  CouplingProfile prof;
  const double rate = std::pow(n, -1.0 / 3.0 + eps);
  std::size_t under = 0;
  for (long long k = -window; k <= window; ++k) {
    CouplingRow row;
    row.k = k;
    row.y_small = small(k);
    row.y_large = large(k);
    row.abs_error = std::abs(row.y_small - row.y_large);
    row.envelope = (1.0 + static_cast<double>(k * k)) * rate;
    prof.fitted_constant = std::max(prof.fitted_constant, row.abs_error / row.envelope);
    if (row.abs_error <= row.envelope) ++under;
    prof.rows.push_back(row);
  }
  prof.fraction_under_unit_envelope = static_cast<double>(under) / static_cast<double>(prof.rows.size());
  return prof;
}

double sine_kernel_determinant(std::span<const double> x) {
  const Eigen::Index r = static_cast<Eigen::Index>(x.size());
  if (r < 1) fail(ErrorCode::InvalidArgument, "sine kernel determinant needs r >= 1");
  Eigen::MatrixXd k(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      k(i, j) = sinc(x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
  return k.partialPivLu().determinant();
}

double sine_pair_correlation(double s) {
  const double v = sinc(s);
  return 1.0 - v * v;
}

PairCorrelation empirical_pair_correlation(std::span<const RescaledPointSet> ensemble, double window,
                                           int bins, double s_max) {
  if (ensemble.size() < kMinPairReplicas)
    fail(ErrorCode::InsufficientReplicas, "pair correlation needs >= " + std::to_string(kMinPairReplicas) +
                                              " replicas, got " + std::to_string(ensemble.size()));
  if (bins < 1 || !(s_max > 0) || !(window > s_max))
    fail(ErrorCode::InvalidArgument, "pair correlation needs bins >= 1 and window > s_max > 0");
  const double width = s_max / bins;
  const std::size_t nb = static_cast<std::size_t>(bins);
  std::vector<std::vector<double>> counts(nb, std::vector<double>(ensemble.size(), 0.0));

  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    const RescaledPointSet& p = ensemble[r];
    if (p.periodic() && window > static_cast<double>(p.source_n()) / 8.0 + 1e-12)
      fail(ErrorCode::InvalidArgument, "pair correlation window must be <= n/8");
    const long long kk = p.window();
    const double lo = -0.5 * window, hi = 0.5 * window;
    if (lo < p(-kk) || hi > p(kk)) fail(ErrorCode::WindowTooSmall, "pair window beyond the point window");
    const long long first = first_at_least(p, lo, -kk, kk);
    const long long last = first_above(p, hi, -kk, kk) - 1;
    for (long long i = first; i <= last; ++i) {
      const double yi = p(i);
      for (long long j = i + 1; j <= last; ++j) {
        const double d = p(j) - yi;
        if (d >= s_max) break;
        const std::size_t b = std::min(nb - 1, static_cast<std::size_t>(d / width));
        counts[b][r] += 1.0;
      }
    }
  }

  PairCorrelation pc;
  pc.replicas = ensemble.size();
  pc.dof = static_cast<double>(bins);
  const double reps = static_cast<double>(ensemble.size());
  for (std::size_t b = 0; b < nb; ++b) {
    const double s0 = width * static_cast<double>(b), s1 = s0 + width;
    const double exposure = simpson([&](double s) { return window - s; }, s0, s1, 2);
    const double expected =
        simpson([&](double s) { return sine_pair_correlation(s) * (window - s); }, s0, s1, 64);
    const SampleMoments mom = moments(counts[b]);
    pc.bin_centers.push_back(0.5 * (s0 + s1));
    pc.density.push_back(mom.mean / exposure);
    pc.stderr_density.push_back(mom.stderr_mean / exposure);
    pc.rho2_theory.push_back(expected / exposure);
    const double var_mean = mom.variance / reps;
    if (var_mean > 0) pc.chi_square += (mom.mean - expected) * (mom.mean - expected) / var_mean;
  }
  pc.p_value = chi_square_sf(pc.chi_square, pc.dof);
  return pc;
}

PowerSumResult power_sum_direct(const RescaledPointSet& points, int alpha, long long window) {
  if (alpha < 1) fail(ErrorCode::InvalidArgument, "power sums need alpha >= 1");
  if (window < 1 || window > points.window())
    fail(ErrorCode::WindowTooSmall, "power-sum truncation exceeds the point window");
  CompensatedSum s;
  // Outermost terms first.
  for (long long k = window; k >= 1; --k) {
    const double yp = points(k), ym = points(-k);
    s.add(std::pow(yp, -alpha) + std::pow(ym, -alpha));
  }
  s.add(std::pow(points(0), -alpha));
  PowerSumResult res;
  res.alpha = alpha;
  res.direct = s.value();
  res.truncation = window;
  if (alpha >= 2) {
    if (points.periodic()) {
      // Each further period holds n points, all beyond m + q n on each side.
      const double m = std::min(points(window + 1), -points(-window - 1));
      const double n = static_cast<double>(points.source_n());
      if (m > 0)
        res.tail_bound = 2.0 * (n * std::pow(m, -alpha) + std::pow(m, 1 - alpha) / (alpha - 1));
    } else {
      const double m = std::min(points(window), -points(-window));
      if (m > 0) res.tail_bound = 2.0 / ((alpha - 1) * std::pow(m, alpha - 1));
    }
  }
  return res;
}

PowerSumResult power_sum_closed_form(const Spectrum& spec, int r_index) {
  if (r_index < 1) fail(ErrorCode::InvalidArgument, "closed-form power sums need alpha >= 1");
  const RationalFunction r = r_alpha(r_index);
  Complex sum(0.0, 0.0);
  double scale = 0.0;
  for (double t : spec.angles()) {
    const Complex x = std::polar(1.0, t);
    if (std::abs(x - 1.0) < 1e-10) fail(ErrorCode::PoleProximity, "eigenvalue too close to the pole at 1");
    const Complex v = r(x);
    sum += v;
    scale += std::abs(v);
  }
  const double n = static_cast<double>(spec.size());
  const Complex factor = -std::pow(Complex(0.0, -2.0 * M_PI / n), r_index + 1) / (2.0 * factorial(r_index));
  const Complex value = factor * sum;
  const double magnitude = std::abs(factor) * scale;
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, magnitude))
    fail(ErrorCode::FormulaInconsistency, "closed-form power sum has a non-negligible imaginary part");
  PowerSumResult res;
  res.alpha = r_index + 1;
  res.closed_form = value.real();
  res.imag_part = value.imag();
  return res;
}

double symmetric_inverse_sum(const Spectrum& spec) {
  CompensatedSum s;
  for (double t : spec.angles()) s.add(1.0 / std::tan(0.5 * t));
  return M_PI / static_cast<double>(spec.size()) * s.value();
}

double lattice_sum_closed_form(int alpha, double x) {
  const RationalFunction r = r_alpha(alpha);
  const Complex ipow = std::pow(Complex(0.0, 1.0), alpha + 1);
  const double sign = (alpha % 2 == 0) ? 1.0 : -1.0;
  const Complex v = 0.5 * ipow * sign / factorial(alpha) * r(std::polar(1.0, x));
  return v.real();
}

}  // namespace xilimit
