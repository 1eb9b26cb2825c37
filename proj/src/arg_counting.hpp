#pragma once

#include "spectrum.hpp"

namespace xilimit {

inline constexpr double kBranchCutTolerance = 1e-13;
// C = pi^2/6 + 1 in the Chernoff bound for X_n.
inline constexpr double kChernoffConstant = 1.6449340668482264365 + 1.0;

// Im log Z_n(0), the principal argument of (-1)^n det U in (-pi, pi].
double im_log_Z0(const Spectrum& spec);

// Im log Z_n(e^{i phi}) on the slit domain:
// Im log Z_n(0) + sum_k (psi_k - pi)/2, psi_k = (phi - theta_k) mod 2 pi in (0, 2 pi).
double im_log_Z(const Spectrum& spec, double phi);

// X_n = Im(log Z_n(1) - log Z_n(0)) = sum_k (pi - theta_k)/2.
double centered_argument(const Spectrum& spec);

// Zeros of Z_n on the counterclockwise arc from e^{i phi_a} to e^{i phi_b},
// from the argument variation. Throws FormulaInconsistency if the pre-round
// value is not within 1e-6 of an integer.
long long count_zeros_arc(const Spectrum& spec, double phi_a, double phi_b);

// Direct count of eigenangles on the same arc.
long long count_angles_in_arc(const Spectrum& spec, double phi_a, double phi_b);

// |k - y_k + (Im log Z_n(e^{i(theta_k + eps)}) - Im log Z_n(e^{i eps})) / pi|
// with eps half the smaller of the gaps after 0 and after theta_k.
double index_identity_residual(const Spectrum& spec, long long k);

struct ArgSupremum {
  double value = 0.0;   // sup over the circle of |Im log Z_n|
  double phi = 0.0;     // eigenangle where it is attained
  bool left_limit = false;
};

// Exact supremum from the piecewise-linear profile: slope n/2 between
// eigenangles, jump -pi at each, so extrema are one-sided limits at eigenangles.
ArgSupremum arg_supremum(const Spectrum& spec);

// E[e^{lambda X_n}] = prod_{k=1..n} Gamma(k)^2 / |Gamma(k + i lambda/2)|^2.
double mgf_exact(int n, double lambda);

// 2 exp(-x^2 / (C + log n)) with C = pi^2/6 + 1.
double chernoff_bound(int n, double x);

}  // namespace xilimit
