#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "spectrum.hpp"

namespace xilimit {

using Complex = std::complex<double>;

enum class XiMethod { Direct, Product };

struct XiEvaluation {
  Complex z;
  Complex value;
  XiMethod method = XiMethod::Direct;
  std::optional<long long> truncation;
  // Bound on |value - full product|; equals tail_constant * log A / A.
  std::optional<double> tail_bound;
  std::optional<double> tail_constant;
};

// xi_n(z) = Z_n(e^{2 i pi z / n}) / Z_n(1) from the eigenangles, accumulated
// as log-modulus plus unit phasor. Refuses spectra with an eigenvalue at 1.
XiEvaluation xi_direct(const Spectrum& spec, Complex z);

// e^{i pi z} (1 - z/y_0) prod_{k=1..A} (1 - z/y_k)(1 - z/y_{-k}).
XiEvaluation xi_product(const RescaledPointSet& points, Complex z, long long truncation);

// Same product on the terminal snapshot of a chain, standing in for y_k.
XiEvaluation xi_infinity_approx(const RescaledPointSet& terminal_points, Complex z,
                                long long truncation);

// |conj-coefficient Z_n(1/z) - z^{-n} (-1)^n det(U^{-1}) Z_n(z)|
double functional_equation_residual(const Spectrum& spec, Complex z);

// log|xi(z)| of the truncated product, without forming the complex value.
double log_abs_product(const RescaledPointSet& points, Complex z, long long truncation);

struct GrowthRow {
  double x = 0.0;
  // 1/2 sum_{|k|<=A} log(1 + x^2 / y_k^2): modulus of the product part at ix.
  double log_abs_product = 0.0;
  // log|xi(ix)| including the prefactor |e^{i pi (ix)}| = e^{-pi x}.
  double log_abs_xi = 0.0;
  double lower_envelope = 0.0;
  double upper_envelope = 0.0;
};

struct GrowthProfile {
  std::vector<GrowthRow> rows;
  // min over rows with |x| >= lower_fit_from of log_abs_product / |x|.
  double lower_constant = 0.0;
  // max over rows with x != 0 of log_abs_xi / (|x| log(2 + |x|)).
  double upper_constant = 0.0;
};

GrowthProfile growth_profile(const RescaledPointSet& points, std::span<const double> x_values,
                             long long truncation, double lower_fit_from = 0.0);

}  // namespace xilimit
