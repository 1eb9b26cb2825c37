#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "arg_counting.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "sine_stats.hpp"
#include "special.hpp"
#include "xi.hpp"

namespace xilimit {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write " + p.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed for " + p.string());
}

std::string grid_rows(const std::vector<std::complex<double>>& zs, const std::vector<XiEvaluation>& vals,
                      long long n) {
  std::string out;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const XiEvaluation& e = vals[i];
    const std::string a = e.truncation ? std::to_string(*e.truncation) : "";
    out += fmt("%.17g,%.17g,%.17g,%.17g,%.17g,%s,%lld,%s\n", zs[i].real(), zs[i].imag(), e.value.real(),
               e.value.imag(), std::abs(e.value), e.method == XiMethod::Direct ? "direct" : "product", n,
               a.c_str());
  }
  return out;
}

}  // namespace

XiGridResult run_xi_grid(const EnsembleRun& run, const GridSpec& grid, std::vector<Eigen::Index> dims,
                         const std::string& out_dir) {
  if (grid.steps < 1) fail(ErrorCode::InvalidArgument, "grid steps must be >= 1");
  for (double b : grid.box)
    if (!std::isfinite(b)) fail(ErrorCode::InvalidArgument, "grid bounds must be finite");
  if (dims.empty()) dims = run.manifest.dims;
  for (Eigen::Index n : dims) run.dim_index(n);
  const Eigen::Index big = run.max_dim();
  const long long trunc = run.manifest.truncation > 0 ? run.manifest.truncation : big;
  const long long window = std::max<long long>(trunc, run.manifest.window);

  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  const std::vector<std::complex<double>> zs = grid_points(grid);
  const std::string header = hash_comment(run.hash) + "re_z,im_z,re_xi,im_xi,abs_xi,method,n,A\n";

  XiGridResult result;
  std::vector<std::vector<std::string>> names(run.replicas.size());
  parallel_for(run.replicas.size(), [&](std::size_t r) {
    const std::uint64_t id = run.replicas[r].replica_id;
    for (Eigen::Index n : dims) {
      const Spectrum& s = run.spectrum(r, n);
      std::vector<XiEvaluation> vals;
      for (const auto& z : zs) vals.push_back(xi_direct(s, z));
      const std::string name = fmt("replica_%06llu_n%05lld.csv", static_cast<unsigned long long>(id),
                                   static_cast<long long>(n));
      write_text(dir / name, header + grid_rows(zs, vals, n));
      names[r].push_back(name);
    }
    const RescaledPointSet pts = rescaled_points(run.spectrum(r, big), window);
    std::vector<XiEvaluation> vals;
    for (const auto& z : zs) vals.push_back(xi_infinity_approx(pts, z, trunc));
    const std::string name = fmt("replica_%06llu_inf.csv", static_cast<unsigned long long>(id));
    write_text(dir / name, header + grid_rows(zs, vals, big));
    names[r].push_back(name);
  });
  for (const auto& v : names)
    for (const auto& n : v) result.files.push_back((dir / n).string());

  std::vector<std::vector<Spectrum>> small;
  for (Eigen::Index n : dims)
    if (n < big) small.push_back(run.spectra_at(n));
  const std::vector<Spectrum> top = run.spectra_at(big);
  std::string per_replica = hash_comment(run.hash) + "replica_id,n,N,sup_gap\n";
  for (const auto& ens : small)
    for (std::size_t r = 0; r < ens.size(); ++r)
      per_replica += fmt("%llu,%lld,%lld,%.17g\n", static_cast<unsigned long long>(run.replicas[r].replica_id),
                         static_cast<long long>(ens[r].size()), static_cast<long long>(big),
                         xi_sup_gap(ens[r], top[r], grid));
  write_text(dir / "convergence_summary.csv", per_replica);
  result.files.push_back((dir / "convergence_summary.csv").string());
  if (!small.empty()) result.convergence = xi_convergence_medians(small, top, grid);
  std::string medians = hash_comment(run.hash) + "n,N,median_sup_gap,replicas\n";
  for (const ScalingRow& row : result.convergence.rows)
    medians += fmt("%lld,%lld,%.17g,%zu\n", static_cast<long long>(row.n), static_cast<long long>(big),
                   row.median, row.replicas);
  write_text(dir / "convergence_median.csv", medians);
  result.files.push_back((dir / "convergence_median.csv").string());
  return result;
}

std::string run_stats(const EnsembleRun& run, const std::string& kind, const StatsOptions& o) {
  const Eigen::Index n = o.n > 0 ? o.n : run.max_dim();
  const std::vector<Spectrum> spectra = run.spectra_at(n);
  const std::string head = hash_comment(run.hash);
  std::string text;
  std::string ext = "csv";
  using nlohmann::json;

  if (kind == "variance") {
    std::vector<double> lengths;
    for (double a = 2; a <= std::min(64.0, static_cast<double>(n) / 8.0); a *= 2) lengths.push_back(a);
    if (lengths.size() < 2) fail(ErrorCode::InvalidArgument, "n too small for A in {2, 4, ...}");
    const CountStatistics st = variance_profile(spectra, lengths);
    text = head + fmt("# slope: %.17g ci95: [%.17g, %.17g] target: %.17g\n", st.slope, st.slope_lo, st.slope_hi,
                      1.0 / (M_PI * M_PI)) +
           "A,mean,var,stderr,n_replicas\n";
    for (std::size_t i = 0; i < lengths.size(); ++i)
      text += fmt("%.17g,%.17g,%.17g,%.17g,%zu\n", lengths[i], st.mean[i], st.variance[i], st.stderr_var[i],
                  st.replicas);
  } else if (kind == "paircorr") {
    std::vector<RescaledPointSet> pts;
    for (const Spectrum& s : spectra) pts.push_back(rescaled_points(s, s.size()));
    const PairCorrelation pc = empirical_pair_correlation(pts, static_cast<double>(n) / 8.0, o.bins);
    text = head + fmt("# chi_square: %.17g dof: %.17g p_value: %.17g\n", pc.chi_square, pc.dof, pc.p_value) +
           "s_bin_center,density,stderr,rho2_theory\n";
    for (std::size_t b = 0; b < pc.bin_centers.size(); ++b)
      text += fmt("%.17g,%.17g,%.17g,%.17g\n", pc.bin_centers[b], pc.density[b], pc.stderr_density[b],
                  pc.rho2_theory[b]);
  } else if (kind == "deviation") {
    const long long window = o.window > 0 ? o.window : std::max<long long>(1, n / 2);
    const std::vector<double> d = deviation_statistics(spectra, window);
    text = head + fmt("# p99: %.17g\n", quantile(d, 0.99)) + "replica_id,n,K,statistic\n";
    for (std::size_t r = 0; r < d.size(); ++r)
      text += fmt("%llu,%lld,%lld,%.17g\n", static_cast<unsigned long long>(run.replicas[r].replica_id),
                  static_cast<long long>(n), window, d[r]);
  } else if (kind == "coupling") {
    const Eigen::Index big = run.max_dim();
    std::vector<std::vector<Spectrum>> small;
    for (Eigen::Index m : run.manifest.dims)
      if (m < big) small.push_back(run.spectra_at(m));
    if (small.empty()) fail(ErrorCode::InvalidArgument, "coupling needs at least two dims");
    const ScalingSummary s = coupling_medians(small, run.spectra_at(big), 1);
    text = head + fmt("# log_log_slope: %.17g strictly_decreasing: %d\n", s.log_log_slope,
                      s.strictly_decreasing ? 1 : 0) +
           "n,N,k,median_abs_error,replicas\n";
    for (const ScalingRow& row : s.rows)
      text += fmt("%lld,%lld,1,%.17g,%zu\n", static_cast<long long>(row.n), static_cast<long long>(big),
                  row.median, row.replicas);
  } else if (kind == "mgf") {
    const MgfEstimate e = mgf_monte_carlo(spectra, o.lambda);
    text = json{{"manifest_hash", run.hash}, {"n", e.n},           {"lambda", e.lambda},
                {"exact", e.exact},          {"mc_mean", e.mc_mean}, {"mc_stderr", e.mc_stderr},
                {"z_score", e.z_score}}
               .dump(2) +
           "\n";
    ext = "json";
  } else if (kind == "args") {
    text = head + "replica_id,n,X_n,arg_sup,arg_sup_over_log_n\n";
    for (const ArgRow& r : arg_statistics(spectra))
      text += fmt("%llu,%lld,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(r.replica_id),
                  static_cast<long long>(r.n), r.x_n, r.arg_sup, r.arg_sup_over_log_n);
  } else if (kind == "powersum") {
    const long long window = o.window > 0 ? o.window : std::max<long long>(4096, 4 * n);
    json rows = json::array();
    for (std::size_t r = 0; r < spectra.size(); ++r) {
      const PowerSumResult c = power_sum_closed_form(spectra[r], o.alpha);
      const PowerSumResult d = power_sum_direct(rescaled_points(spectra[r], window), o.alpha + 1, window);
      rows.push_back({{"replica_id", run.replicas[r].replica_id},
                      {"alpha", c.alpha},
                      {"direct", *d.direct},
                      {"closed_form", *c.closed_form},
                      {"K", window},
                      {"tail_bound", *d.tail_bound},
                      {"abs_diff", std::abs(*c.closed_form - *d.direct)}});
    }
    text = json{{"manifest_hash", run.hash}, {"n", n}, {"results", rows}}.dump(2) + "\n";
    ext = "json";
  } else {
    fail(ErrorCode::InvalidArgument, "unknown stats kind '" + kind + "'");
  }

  if (!run.directory.empty()) {
    const fs::path dir = fs::path(run.directory) / "stats";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    write_text(dir / fmt("%s_n%lld.%s", kind.c_str(), static_cast<long long>(n), ext.c_str()), text);
  }
  return text;
}

}  // namespace xilimit
