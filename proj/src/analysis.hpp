#pragma once

#include <span>
#include <vector>

#include "manifest.hpp"
#include "spectrum.hpp"

namespace xilimit {

struct MgfEstimate {
  int n = 0;
  double lambda = 0.0;
  double exact = 0.0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  double z_score = 0.0;
};

// Monte Carlo mean of e^{lambda X_n} against mgf_exact.
MgfEstimate mgf_monte_carlo(std::span<const Spectrum> spectra, double lambda);

struct TailRow {
  double x = 0.0;
  double empirical = 0.0;  // fraction with |X_n| >= x
  double bound = 0.0;      // chernoff_bound(n, x)
};
std::vector<TailRow> chernoff_tails(std::span<const Spectrum> spectra, std::span<const double> xs);

struct ArgRow {
  std::uint64_t replica_id = 0;
  Eigen::Index n = 0;
  double x_n = 0.0;
  double arg_sup = 0.0;
  double arg_sup_over_log_n = 0.0;
};
std::vector<ArgRow> arg_statistics(std::span<const Spectrum> spectra);

struct ScalingRow {
  Eigen::Index n = 0;
  double median = 0.0;
  std::size_t replicas = 0;
};

struct ScalingSummary {
  std::vector<ScalingRow> rows;
  double log_log_slope = 0.0;  // least squares of log median on log n
  bool strictly_decreasing = false;
};

// Median over replicas of |y_k^{(n)} - y_k^{(N)}| for each n.
// small[i][r] and large[r] must come from the same chain r.
ScalingSummary coupling_medians(const std::vector<std::vector<Spectrum>>& small,
                                std::span<const Spectrum> large, long long k = 1);

// sup over the grid of |xi_n(z) - xi_N(z)|, both from xi_direct.
double xi_sup_gap(const Spectrum& spec_n, const Spectrum& spec_N, const GridSpec& grid);

// Grid points in row-major order (imaginary part outer).
std::vector<std::complex<double>> grid_points(const GridSpec& grid);

// Same as coupling_medians, with the sup gap of xi over the grid.
ScalingSummary xi_convergence_medians(const std::vector<std::vector<Spectrum>>& small,
                                      std::span<const Spectrum> large, const GridSpec& grid);

// Deviation statistic per replica with window K.
std::vector<double> deviation_statistics(std::span<const Spectrum> spectra, long long window);

}  // namespace xilimit
