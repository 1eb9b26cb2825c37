#include "analysis.hpp"

#include <algorithm>
#include <cmath>

#include "arg_counting.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "sine_stats.hpp"
#include "special.hpp"
#include "xi.hpp"

namespace xilimit {

namespace {

ScalingSummary summarize(std::vector<ScalingRow> rows) {
  ScalingSummary s;
  std::vector<double> lx, ly;
  s.strictly_decreasing = rows.size() >= 2;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(rows[i].n)));
    ly.push_back(std::log(rows[i].median));
    if (i > 0 && !(rows[i].median < rows[i - 1].median)) s.strictly_decreasing = false;
  }
  if (rows.size() >= 2) s.log_log_slope = fit_line(lx, ly).slope;
  s.rows = std::move(rows);
  return s;
}

void check_shapes(const std::vector<std::vector<Spectrum>>& small, std::span<const Spectrum> large) {
  for (const auto& v : small)
    if (v.size() != large.size())
      fail(ErrorCode::InvalidArgument, "coupled ensembles must have equal replica counts");
}

}  // namespace

MgfEstimate mgf_monte_carlo(std::span<const Spectrum> spectra, double lambda) {
  if (spectra.size() < 2) fail(ErrorCode::InsufficientReplicas, "MGF estimate needs >= 2 replicas");
  std::vector<double> v;
  v.reserve(spectra.size());
  const Eigen::Index n = spectra.front().size();
  for (const Spectrum& s : spectra) {
    if (s.size() != n) fail(ErrorCode::InvalidArgument, "ensemble mixes dimensions");
    v.push_back(std::exp(lambda * centered_argument(s)));
  }
  const SampleMoments m = moments(v);
  MgfEstimate e;
  e.n = static_cast<int>(n);
  e.lambda = lambda;
  e.exact = mgf_exact(e.n, lambda);
  e.mc_mean = m.mean;
  e.mc_stderr = m.stderr_mean;
  e.z_score = m.stderr_mean > 0 ? (m.mean - e.exact) / m.stderr_mean : 0.0;
  return e;
}

std::vector<TailRow> chernoff_tails(std::span<const Spectrum> spectra, std::span<const double> xs) {
  if (spectra.empty()) fail(ErrorCode::InsufficientReplicas, "tail estimate needs replicas");
  std::vector<double> abs_x;
  for (const Spectrum& s : spectra) abs_x.push_back(std::abs(centered_argument(s)));
  const int n = static_cast<int>(spectra.front().size());
  std::vector<TailRow> rows;
  for (double x : xs) {
    const auto hits = std::count_if(abs_x.begin(), abs_x.end(), [&](double a) { return a >= x; });
    rows.push_back({x, static_cast<double>(hits) / static_cast<double>(abs_x.size()), chernoff_bound(n, x)});
  }
  return rows;
}

std::vector<ArgRow> arg_statistics(std::span<const Spectrum> spectra) {
  std::vector<ArgRow> rows(spectra.size());
  parallel_for(spectra.size(), [&](std::size_t i) {
    const Spectrum& s = spectra[i];
    ArgRow& r = rows[i];
    r.replica_id = s.provenance() ? s.provenance()->replica_id : i;
    r.n = s.size();
    r.x_n = centered_argument(s);
    r.arg_sup = arg_supremum(s).value;
    r.arg_sup_over_log_n = r.n > 1 ? r.arg_sup / std::log(static_cast<double>(r.n)) : 0.0;
  });
  return rows;
}

ScalingSummary coupling_medians(const std::vector<std::vector<Spectrum>>& small,
                                std::span<const Spectrum> large, long long k) {
  check_shapes(small, large);
  std::vector<ScalingRow> rows;
  for (const auto& ens : small) {
    std::vector<double> err;
    for (std::size_t r = 0; r < ens.size(); ++r) {
      if (ens[r].provenance() != large[r].provenance() || !ens[r].provenance())
        fail(ErrorCode::NotCoupled, "replica order differs between dimensions");
      const double a = rescaled_points(ens[r], std::max<long long>(1, std::abs(k)))(k);
      const double b = rescaled_points(large[r], std::max<long long>(1, std::abs(k)))(k);
      err.push_back(std::abs(a - b));
    }
    rows.push_back({ens.front().size(), median(err), ens.size()});
  }
  return summarize(std::move(rows));
}

std::vector<std::complex<double>> grid_points(const GridSpec& grid) {
  std::vector<std::complex<double>> pts;
  const int m = grid.steps;
  auto coord = [m](double lo, double hi, int i) {
    return m == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
  };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      pts.emplace_back(coord(grid.box[0], grid.box[1], i), coord(grid.box[2], grid.box[3], j));
  return pts;
}

double xi_sup_gap(const Spectrum& spec_n, const Spectrum& spec_N, const GridSpec& grid) {
  double worst = 0.0;
  for (const auto& z : grid_points(grid))
    worst = std::max(worst, std::abs(xi_direct(spec_n, z).value - xi_direct(spec_N, z).value));
  return worst;
}

ScalingSummary xi_convergence_medians(const std::vector<std::vector<Spectrum>>& small,
                                      std::span<const Spectrum> large, const GridSpec& grid) {
  check_shapes(small, large);
  std::vector<ScalingRow> rows;
  for (const auto& ens : small) {
    std::vector<double> gaps(ens.size());
    parallel_for(ens.size(), [&](std::size_t r) {
      if (ens[r].provenance() != large[r].provenance() || !ens[r].provenance())
        fail(ErrorCode::NotCoupled, "replica order differs between dimensions");
      gaps[r] = xi_sup_gap(ens[r], large[r], grid);
    });
    rows.push_back({ens.front().size(), median(gaps), ens.size()});
  }
  return summarize(std::move(rows));
}

std::vector<double> deviation_statistics(std::span<const Spectrum> spectra, long long window) {
  std::vector<double> out(spectra.size());
  parallel_for(spectra.size(), [&](std::size_t i) {
    out[i] = deviation_profile(rescaled_points(spectra[i], window), window);
  });
  return out;
}

}  // namespace xilimit
