#include "xi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "sine_stats.hpp"
#include "special.hpp"

namespace xilimit {

namespace {

// Accumulates a product of complex factors as log-modulus and unit phasor.
class LogProduct {
 public:
  void multiply(Complex f) {
    const double r = std::abs(f);
    if (r == 0.0) {
      zero_ = true;
      return;
    }
    log_mod_ += std::log(r);
    phasor_ *= f / r;
    if (++since_renorm_ == 64) {
      phasor_ /= std::abs(phasor_);
      since_renorm_ = 0;
    }
  }
  void multiply_exp(Complex w) {  // multiply by e^w
    log_mod_ += w.real();
    phasor_ *= std::polar(1.0, w.imag());
  }
  Complex value() const {
    if (zero_) return Complex(0.0, 0.0);
    if (log_mod_ == 0.0 && phasor_ == Complex(1.0, 0.0)) return phasor_;
    return std::exp(log_mod_) * (phasor_ / std::abs(phasor_));
  }
  double log_abs() const {
    return zero_ ? -std::numeric_limits<double>::infinity() : log_mod_;
  }

 private:
  double log_mod_ = 0.0;
  Complex phasor_{1.0, 0.0};
  bool zero_ = false;
  int since_renorm_ = 0;
};

Complex pair_factor(Complex z, double y) { return 1.0 - z / y; }

void check_point(double y, long long k) {
  if (y == 0.0 || !std::isfinite(y))
    fail(ErrorCode::InvalidPoints, "rescaled point y_" + std::to_string(k) + " is zero");
}

// Bound on |prod_{|k|<=A} - prod_{k in Z}| from the remaining power sums.
// log T = -sum_m z^m S_m / m, with S_m the tail sums beyond |k| = A.
std::optional<double> periodic_tail_bound(const RescaledPointSet& points, Complex z,
                                          long long a, double partial_abs) {
  const Spectrum& spec = points.spectrum();
  const double m_a = std::min(points(a + 1), -points(-a - 1));
  const double az = std::abs(z);
  if (!(az < 0.5 * m_a)) return std::nullopt;

  CompensatedSum s1_partial, s2_partial;
  s1_partial.add(1.0 / points(0));
  s2_partial.add(1.0 / (points(0) * points(0)));
  for (long long k = 1; k <= a; ++k) {
    const double yp = points(k), ym = points(-k);
    s1_partial.add(1.0 / yp + 1.0 / ym);
    s2_partial.add(1.0 / (yp * yp) + 1.0 / (ym * ym));
  }
  const double s1_total = symmetric_inverse_sum(spec);
  const double s2_total = power_sum_closed_form(spec, 1).closed_form.value();
  const double s1 = s1_total - s1_partial.value();
  const double s2 = std::max(0.0, s2_total - s2_partial.value());
  const double bound_log = az * std::abs(s1) + 0.5 * az * az * s2 / (1.0 - az / m_a);
  return partial_abs * std::expm1(bound_log);
}

// Without the periodic structure, assume unit density beyond the window and
// deviations of order log(2 + |k|).
double generic_tail_bound(Complex z, long long a, double partial_abs) {
  const double az = std::abs(z);
  const double aa = static_cast<double>(a);
  const double bound_log = az * (2.0 + az) * std::log(2.0 + aa) / aa;
  return partial_abs * std::expm1(bound_log);
}

}  // namespace

XiEvaluation xi_direct(const Spectrum& spec, Complex z) {
  if (!(spec.gap_to_one() > kTieTolerance))
    fail(ErrorCode::NearUnityEigenvalue, "xi_n is unstable: eigenvalue at 1");
  const double n = static_cast<double>(spec.size());
  const Complex shift = M_PI * z / n;
  // (e^{2 i pi z/n} - e^{i t}) / (1 - e^{i t}) = e^{i pi z/n} sin(t/2 - pi z/n) / sin(t/2)
  LogProduct prod;
  if (z != Complex(0.0, 0.0)) {
    prod.multiply_exp(Complex(0.0, M_PI) * z);
    for (double t : spec.angles()) {
      const double half = 0.5 * t;
      prod.multiply(std::sin(Complex(half, 0.0) - shift) / std::sin(half));
    }
  }
  XiEvaluation out;
  out.z = z;
  out.value = prod.value();
  out.method = XiMethod::Direct;
  return out;
}

XiEvaluation xi_product(const RescaledPointSet& points, Complex z, long long truncation) {
  if (truncation < 1) fail(ErrorCode::InvalidArgument, "truncation A must be >= 1");
  if (truncation > points.window())
    fail(ErrorCode::WindowTooSmall, "truncation exceeds the point window");
  LogProduct prod;
  double log_abs_partial = 0.0;
  if (z != Complex(0.0, 0.0)) {
    const double y0 = points(0);
    check_point(y0, 0);
    prod.multiply(pair_factor(z, y0));
    for (long long k = 1; k <= truncation; ++k) {
      const double yp = points(k), ym = points(-k);
      check_point(yp, k);
      check_point(ym, -k);
      prod.multiply(pair_factor(z, yp) * pair_factor(z, ym));
    }
    prod.multiply_exp(Complex(0.0, M_PI) * z);
    log_abs_partial = prod.log_abs();
  }
  XiEvaluation out;
  out.z = z;
  out.value = prod.value();
  out.method = XiMethod::Product;
  out.truncation = truncation;
  const double partial_abs = std::exp(log_abs_partial);
  std::optional<double> bound;
  if (z == Complex(0.0, 0.0))
    bound = 0.0;
  else if (points.periodic())
    bound = periodic_tail_bound(points, z, truncation, partial_abs);
  if (!bound) bound = generic_tail_bound(z, truncation, partial_abs);
  out.tail_bound = *bound;
  const double a = static_cast<double>(truncation);
  out.tail_constant = truncation > 1 ? *bound * a / std::log(a) : *bound;
  return out;
}

XiEvaluation xi_infinity_approx(const RescaledPointSet& terminal_points, Complex z,
                                long long truncation) {
  return xi_product(terminal_points, z, truncation);
}

double functional_equation_residual(const Spectrum& spec, Complex z) {
  if (z == Complex(0.0, 0.0)) fail(ErrorCode::InvalidArgument, "functional equation needs z != 0");
  const Eigen::Index n = spec.size();
  const Complex inv = 1.0 / z;
  Complex lhs(1.0, 0.0), zn(1.0, 0.0);
  double angle_sum = 0.0;
  for (double t : spec.angles()) {
    const Complex lambda = std::polar(1.0, t);
    lhs *= inv - std::conj(lambda);
    zn *= z - lambda;
    angle_sum += t;
  }
  const Complex det_inv = std::polar(1.0, -angle_sum);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const Complex rhs = std::pow(z, -static_cast<double>(n)) * sign * det_inv * zn;
  return std::abs(lhs - rhs);
}

double log_abs_product(const RescaledPointSet& points, Complex z, long long truncation) {
  if (truncation > points.window())
    fail(ErrorCode::WindowTooSmall, "truncation exceeds the point window");
  CompensatedSum s;
  s.add(-M_PI * z.imag());
  s.add(std::log(std::abs(pair_factor(z, points(0)))));
  for (long long k = 1; k <= truncation; ++k)
    s.add(std::log(std::abs(pair_factor(z, points(k)) * pair_factor(z, points(-k)))));
  return s.value();
}

GrowthProfile growth_profile(const RescaledPointSet& points, std::span<const double> x_values,
                             long long truncation, double lower_fit_from) {
  if (truncation > points.window())
    fail(ErrorCode::WindowTooSmall, "truncation exceeds the point window");
  GrowthProfile profile;
  profile.lower_constant = std::numeric_limits<double>::infinity();
  profile.upper_constant = 0.0;
  for (double x : x_values) {
    GrowthRow row;
    row.x = x;
    if (x != 0.0) {
      CompensatedSum s;
      const double x2 = x * x;
      s.add(std::log1p(x2 / (points(0) * points(0))));
      for (long long k = 1; k <= truncation; ++k) {
        const double yp = points(k), ym = points(-k);
        s.add(std::log1p(x2 / (yp * yp)));
        s.add(std::log1p(x2 / (ym * ym)));
      }
      row.log_abs_product = 0.5 * s.value();
      row.log_abs_xi = row.log_abs_product - M_PI * x;
      const double ax = std::abs(x);
      if (ax >= lower_fit_from)
        profile.lower_constant = std::min(profile.lower_constant, row.log_abs_product / ax);
      profile.upper_constant =
          std::max(profile.upper_constant, row.log_abs_xi / (ax * std::log(2.0 + ax)));
    }
    profile.rows.push_back(row);
  }
  if (!std::isfinite(profile.lower_constant)) profile.lower_constant = 0.0;
  for (GrowthRow& row : profile.rows) {
    const double ax = std::abs(row.x);
    row.lower_envelope = profile.lower_constant * ax;
    row.upper_envelope = profile.upper_constant * ax * std::log(2.0 + ax);
  }
  return profile;
}

}  // namespace xilimit
