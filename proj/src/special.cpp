#include "special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "error.hpp"

namespace xilimit {

namespace {

using Complex = std::complex<double>;

// B_{2m} / (2m (2m - 1)) for m = 1..10.
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,         1.0 / 1260.0,         -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,    1.0 / 156.0,          -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0,
};

double kolmogorov_sf(double lambda) {
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

Complex lgamma_complex(Complex z) {
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
    return std::log(M_PI / std::sin(M_PI * z)) - lgamma_complex(1.0 - z);
  }
  Complex shift(0.0, 0.0);
  while (std::abs(z) < 16.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series(0.0, 0.0);
  Complex power = inv;
  for (double c : kStirling) {
    series += c * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * M_PI) + series - shift;
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m || (!weights.empty() && weights.size() != m))
    fail(ErrorCode::InvalidArgument, "fit_line needs >= 2 matched points");
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (weights.empty()) {
    double rss = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
  } else {
    fit.slope_stderr = std::sqrt(1.0 / sxx);
  }
  fit.slope_lo = fit.slope - 1.959963984540054 * fit.slope_stderr;
  fit.slope_hi = fit.slope + 1.959963984540054 * fit.slope_stderr;
  return fit;
}

SampleMoments moments(std::span<const double> values) {
  SampleMoments m;
  m.count = values.size();
  if (values.empty()) return m;
  CompensatedSum s;
  for (double v : values) s.add(v);
  m.mean = s.value() / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum q;
    for (double v : values) q.add((v - m.mean) * (v - m.mean));
    m.variance = q.value() / static_cast<double>(values.size() - 1);
    m.stderr_mean = std::sqrt(m.variance / static_cast<double>(values.size()));
  }
  return m;
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorCode::InvalidArgument, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double chi_square_sf(double x, double dof) {
  if (x <= 0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

KsResult ks_test(std::vector<double> samples, double (*cdf)(double)) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "KS test on empty sample");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  const double sq = std::sqrt(m);
  return {d, kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d)};
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "KS test on empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace xilimit
