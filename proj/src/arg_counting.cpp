#include "arg_counting.hpp"

#include <cmath>
#include <string>

#include "error.hpp"
#include "special.hpp"

namespace xilimit {

namespace {

double wrap_2pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

void check_off_cut(const Spectrum& spec, double phi) {
  const double p = wrap_2pi(phi);
  for (double t : spec.angles()) {
    const double d = std::abs(p - t);
    if (std::min(d, kTwoPi - d) < kBranchCutTolerance)
      fail(ErrorCode::OnBranchCut, "phi lies on the cut through an eigenvalue");
  }
}

double profile_sum(const Spectrum& spec, double phi) {
  const double p = wrap_2pi(phi);
  CompensatedSum s;
  for (double t : spec.angles()) {
    double psi = p - t;
    if (psi <= 0.0) psi += kTwoPi;
    s.add(0.5 * (psi - M_PI));
  }
  return s.value();
}

}  // namespace

double im_log_Z0(const Spectrum& spec) {
  CompensatedSum s;
  for (double t : spec.angles()) s.add(t);
  s.add(M_PI * static_cast<double>(spec.size() % 2));
  double v = std::remainder(s.value(), kTwoPi);
  if (v <= -M_PI) v += kTwoPi;
  return v;
}

double im_log_Z(const Spectrum& spec, double phi) {
  check_off_cut(spec, phi);
  return im_log_Z0(spec) + profile_sum(spec, phi);
}

double centered_argument(const Spectrum& spec) {
  CompensatedSum s;
  for (double t : spec.angles()) s.add(0.5 * (M_PI - t));
  return s.value();
}

long long count_zeros_arc(const Spectrum& spec, double phi_a, double phi_b) {
  const double n = static_cast<double>(spec.size());
  const double len = wrap_2pi(phi_b - phi_a);
  const double value =
      n * len / kTwoPi - (im_log_Z(spec, phi_b) - im_log_Z(spec, phi_a)) / M_PI;
  const double rounded = std::round(value);
  if (!(std::abs(value - rounded) < 1e-6))
    fail(ErrorCode::FormulaInconsistency,
         "counting formula residual " + std::to_string(std::abs(value - rounded)));
  return static_cast<long long>(rounded);
}

long long count_angles_in_arc(const Spectrum& spec, double phi_a, double phi_b) {
  const double len = wrap_2pi(phi_b - phi_a);
  long long count = 0;
  for (double t : spec.angles())
    if (wrap_2pi(t - phi_a) < len) ++count;
  return count;
}

double index_identity_residual(const Spectrum& spec, long long k) {
  const long long n = spec.size();
  const long long r = ((k - 1) % n + n) % n + 1;  // 1..n
  const double after_k = spec.periodized_angle(r + 1) - spec.angle(r);
  const double eps = 0.5 * std::min(spec.angle(1), after_k);
  const double theta_k = spec.periodized_angle(k);
  const double y_k = static_cast<double>(n) * theta_k / kTwoPi;
  const double variation = im_log_Z(spec, theta_k + eps) - im_log_Z(spec, eps);
  return std::abs(static_cast<double>(k) - y_k + variation / M_PI);
}

ArgSupremum arg_supremum(const Spectrum& spec) {
  const Eigen::Index n = spec.size();
  const double base = im_log_Z0(spec);
  // Right limit at theta_1: the k = 1 term sits at psi = 0+, i.e. -pi/2.
  CompensatedSum s;
  s.add(base);
  s.add(-0.5 * M_PI);
  const double t1 = spec.angle(1);
  for (Eigen::Index j = 2; j <= n; ++j) {
    double psi = t1 - spec.angle(j);
    if (psi <= 0.0) psi += kTwoPi;
    s.add(0.5 * (psi - M_PI));
  }
  const double right_1 = s.value();
  ArgSupremum best;
  best.value = -1.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double right = right_1 + 0.5 * static_cast<double>(n) * (spec.angle(k) - t1) -
                         M_PI * static_cast<double>(k - 1);
    const double left = right + M_PI;
    if (std::abs(left) > best.value) best = {std::abs(left), spec.angle(k), true};
    if (std::abs(right) > best.value) best = {std::abs(right), spec.angle(k), false};
  }
  return best;
}

double mgf_exact(int n, double lambda) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "mgf_exact needs n >= 1");
  if (lambda == 0.0) return 1.0;
  CompensatedSum s;
  for (int k = 1; k <= n; ++k) {
    const double kk = static_cast<double>(k);
    s.add(2.0 * std::lgamma(kk));
    s.add(-2.0 * lgamma_complex(std::complex<double>(kk, 0.5 * lambda)).real());
  }
  return std::exp(s.value());
}

double chernoff_bound(int n, double x) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "chernoff_bound needs n >= 1");
  if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "chernoff_bound needs x > 0");
  return 2.0 * std::exp(-x * x / (kChernoffConstant + std::log(static_cast<double>(n))));
}

}  // namespace xilimit
