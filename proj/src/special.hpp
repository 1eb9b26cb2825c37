#pragma once

#include <complex>
#include <span>
#include <vector>

namespace xilimit {

// log Gamma(z) on the principal branch for complex z off the non-positive
// real axis. Stirling series after upward recurrence; reflection for Re z < 1/2.
std::complex<double> lgamma_complex(std::complex<double> z);

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  // 95% interval for the slope.
  double slope_lo = 0.0;
  double slope_hi = 0.0;
};

// Weighted least squares y ~ a + b x. With empty weights every point has
// weight 1 and the slope error comes from the residual scatter; otherwise
// weights are 1/sigma^2 and the slope error from the weights.
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights = {});

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
  std::size_t count = 0;
};

SampleMoments moments(std::span<const double> values);

double median(std::vector<double> values);
// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

// Upper tail P(chi2_dof >= x).
double chi_square_sf(double x, double dof);

// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`, and its
// asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};
KsResult ks_test(std::vector<double> samples, double (*cdf)(double));
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace xilimit
