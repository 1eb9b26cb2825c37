#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rational.hpp"
#include "spectrum.hpp"

namespace xilimit {

// Number of y_k in [a, b]. The interval must lie inside [y_{-K}, y_K].
long long count_in_interval(const RescaledPointSet& points, double a, double b);

struct CountStatistics {
  std::vector<double> lengths;       // A values
  std::vector<double> mean;          // mean count per A
  std::vector<double> variance;      // Var(X_A) per A
  std::vector<double> stderr_var;    // standard error of the variance estimate
  // counts[r][i]: count of replica r in [0, A_i].
  std::vector<std::vector<long long>> counts;
  std::size_t replicas = 0;
  std::size_t arcs_per_replica = 0;
  // Weighted fit of variance against log A.
  double slope = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  double intercept = 0.0;
};

inline constexpr std::size_t kMinVarianceReplicas = 100;
inline constexpr std::size_t kMinPairReplicas = 200;

// Variance of the count of rescaled points in [s, s + A]. Each replica
// contributes `arcs_per_replica` equally spaced starting points s around the
// circle (the law is rotation invariant, so each has mean exactly A).
CountStatistics variance_profile(std::span<const Spectrum> ensemble,
                                 std::span<const double> lengths,
                                 std::size_t arcs_per_replica = 16);

// max over 1 <= |k| <= K of |y_k - k| / log(2 + |k|)
double deviation_profile(const RescaledPointSet& points, long long window);

struct CouplingRow {
  long long k = 0;
  double y_small = 0.0;
  double y_large = 0.0;
  double abs_error = 0.0;
  double envelope = 0.0;  // (1 + k^2) n^{-1/3 + eps}
};

struct CouplingProfile {
  std::vector<CouplingRow> rows;
  double fitted_constant = 0.0;  // max abs_error / envelope
  double fraction_under_unit_envelope = 0.0;
};

// Compares y_k^{(n)} and y_k^{(N)} of one coupled chain for |k| <= K.
CouplingProfile coupling_error_profile(const Spectrum& spec_n, const Spectrum& spec_N,
                                       long long window, double eps);

// det [sin(pi (x_j - x_k)) / (pi (x_j - x_k))]
double sine_kernel_determinant(std::span<const double> x);

// 1 - (sin(pi s) / (pi s))^2
double sine_pair_correlation(double s);

struct PairCorrelation {
  std::vector<double> bin_centers;
  std::vector<double> density;
  std::vector<double> stderr_density;
  std::vector<double> rho2_theory;
  double chi_square = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
  std::size_t replicas = 0;
};

// Pairs of points inside the centered window [-W/2, W/2] whose difference is
// in (0, s_max), binned and compared with the sine-kernel pair correlation.
PairCorrelation empirical_pair_correlation(std::span<const RescaledPointSet> ensemble,
                                           double window, int bins, double s_max = 4.0);

struct PowerSumResult {
  int alpha = 0;  // exponent of the power sum
  std::optional<double> direct;
  std::optional<double> closed_form;
  std::optional<long long> truncation;
  std::optional<double> tail_bound;
  double imag_part = 0.0;
};

// sum_{|k| <= K} y_k^{-alpha}; alpha = 1 pairs k with -k.
PowerSumResult power_sum_direct(const RescaledPointSet& points, int alpha, long long window);

// Exact sum over Z of (y_k^{(n)})^{-(r_index+1)}:
// -(1 / (2 r_index!)) (-2 i pi / n)^{r_index+1} sum_k R_{r_index}(e^{i theta_k}).
PowerSumResult power_sum_closed_form(const Spectrum& spec, int r_index);

// Symmetric sum over Z of 1/y_k^{(n)} = (pi/n) sum_k cot(theta_k / 2).
double symmetric_inverse_sum(const Spectrum& spec);

// (i^{alpha+1} / 2) ((-1)^alpha / alpha!) R_alpha(e^{ix}), which equals
// sum_k (x + 2 pi k)^{-(alpha+1)} (symmetric sum for alpha = 0).
double lattice_sum_closed_form(int alpha, double x);

}  // namespace xilimit
