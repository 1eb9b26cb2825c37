#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include <json.hpp>

#include "analysis.hpp"
#include "arg_counting.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "sine_stats.hpp"
#include "special.hpp"
#include "xi.hpp"

namespace xilimit {

namespace {

using Complex = std::complex<double>;

constexpr std::size_t kIdentityReplicaCap = 20;
constexpr std::size_t kHeavyReplicaCap = 5;
constexpr int kArcsPerSpectrum = 200;

struct Tally {
  double max_residual = 0.0;
  std::size_t count = 0;
  bool ok = true;

  void add(double residual, bool pass) {
    max_residual = std::max(max_residual, std::isnan(residual) ? INFINITY : residual);
    ++count;
    ok = ok && pass;
  }
};

// Runs body over (replica, dim) pairs of the first `cap` replicas and merges tallies.
CheckResult per_spectrum_check(const EnsembleRun& run, std::string name, double threshold,
                               std::size_t cap,
                               const std::function<void(const Spectrum&, std::size_t, Tally&)>& body) {
  CheckResult res;
  res.name = std::move(name);
  res.threshold = threshold;
  const std::size_t reps = std::min(cap, run.replicas.size());
  const std::size_t dims = run.manifest.dims.size();
  std::vector<Tally> tallies(reps * dims);
  try {
    parallel_for(reps * dims, [&](std::size_t i) {
      const std::size_t r = i / dims, d = i % dims;
      body(run.replicas[r].spectra.at(d), r, tallies[i]);
    });
    res.passed = true;
    for (const Tally& t : tallies) {
      res.max_residual = std::max(res.max_residual, t.max_residual);
      res.count += t.count;
      res.passed = res.passed && t.ok;
    }
  } catch (const Error& e) {
    res.passed = false;
    res.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return res;
}

CheckResult guarded(std::string name, bool hard, double threshold,
                    const std::function<void(CheckResult&)>& body) {
  CheckResult res;
  res.name = std::move(name);
  res.hard = hard;
  res.threshold = threshold;
  try {
    body(res);
  } catch (const Error& e) {
    res.passed = false;
    res.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return res;
}

double wrap_pi(double a) { return a - kTwoPi * std::round(a / kTwoPi); }

RngStream verify_stream(const EnsembleRun& run, std::size_t r, const Spectrum& s) {
  // One stream per (replica, dimension).
  return derive_stream(run.manifest.seed, run.replicas[r].replica_id * 65536 + static_cast<std::uint64_t>(s.size()),
                       tags::kVerify);
}

void identity_checks(const EnsembleRun& run, std::vector<CheckResult>& out) {
  out.push_back(guarded("unitarity", true, 1e-10, [&](CheckResult& c) {
    c.passed = true;
    for (const ReplicaRecord& rec : run.replicas)
      for (const ChainSnapshot& s : rec.snapshots) {
        c.max_residual = std::max(c.max_residual, s.unitarity_residual);
        c.passed = c.passed && s.unitarity_residual <= c.threshold;
        ++c.count;
      }
  }));

  out.push_back(guarded("det_phase_vs_angle_sum", true, 1e-8, [&](CheckResult& c) {
    c.passed = true;
    for (const ReplicaRecord& rec : run.replicas)
      for (std::size_t d = 0; d < rec.spectra.size(); ++d) {
        CompensatedSum sum;
        for (double t : rec.spectra[d].angles()) sum.add(t);
        const double r = std::abs(wrap_pi(sum.value() - rec.snapshots.at(d).det_phase));
        c.max_residual = std::max(c.max_residual, r);
        c.passed = c.passed && r <= c.threshold;
        ++c.count;
      }
  }));

  out.push_back(per_spectrum_check(run, "counting_formula", 1e-6, kIdentityReplicaCap,
                                   [&](const Spectrum& s, std::size_t r, Tally& t) {
    RngStream rng = verify_stream(run, r, s);
    const double n = static_cast<double>(s.size());
    for (int i = 0; i < kArcsPerSpectrum; ++i) {
      const double a = kTwoPi * rng.uniform();
      const double len = kTwoPi * rng.uniform();
      const double b = std::fmod(a + len, kTwoPi);
      const double raw = n * len / kTwoPi - (im_log_Z(s, b) - im_log_Z(s, a)) / M_PI;
      const double residual = std::abs(raw - std::round(raw));
      const bool match = count_zeros_arc(s, a, b) == count_angles_in_arc(s, a, b);
      t.add(residual, match && residual < 1e-6);
    }
  }));

  out.push_back(per_spectrum_check(run, "index_identity", 1e-8, kIdentityReplicaCap,
                                   [&](const Spectrum& s, std::size_t r, Tally& t) {
    const long long n = s.size();
    if (n <= 64) {
      for (long long k = -n; k <= 2 * n; ++k) {
        const double res = index_identity_residual(s, k);
        t.add(res, res <= 1e-8);
      }
    } else {
      RngStream rng = verify_stream(run, r, s);
      for (int i = 0; i < 200; ++i) {
        const long long k = -n + static_cast<long long>(rng.next_u64() % static_cast<std::uint64_t>(3 * n + 1));
        const double res = index_identity_residual(s, k);
        t.add(res, res <= 1e-8);
      }
    }
  }));

  out.push_back(per_spectrum_check(run, "functional_equation", 1e-10, kIdentityReplicaCap,
                                   [&](const Spectrum& s, std::size_t r, Tally& t) {
    RngStream rng = verify_stream(run, r, s);
    const double n = static_cast<double>(s.size());
    auto one = [&](Complex z) {
      const double res = functional_equation_residual(s, z) / n;
      t.add(res, res <= 1e-10);
    };
    one(Complex(1.0, 0.0));
    for (int i = 0; i < 32; ++i) one(std::polar(1.0, kTwoPi * rng.uniform()));
  }));

  out.push_back(per_spectrum_check(run, "power_sum_closed_vs_direct", 1e-10, kHeavyReplicaCap,
                                   [&](const Spectrum& s, std::size_t, Tally& t) {
    const long long window = std::max<long long>(4096, 4 * s.size());
    const RescaledPointSet pts = rescaled_points(s, window + 1);
    for (int alpha = 1; alpha <= 3; ++alpha) {
      const PowerSumResult closed = power_sum_closed_form(s, alpha);
      const PowerSumResult direct = power_sum_direct(pts, alpha + 1, window);
      const double diff = std::abs(*closed.closed_form - *direct.direct);
      const double excess = diff - *direct.tail_bound;
      const double tol = 1e-10 * std::max(1.0, std::abs(*closed.closed_form));
      t.add(std::max(0.0, excess) / std::max(1.0, std::abs(*closed.closed_form)), excess <= tol);
    }
  }));

  out.push_back(per_spectrum_check(run, "product_vs_direct", 1e-10, kHeavyReplicaCap,
                                   [&](const Spectrum& s, std::size_t, Tally& t) {
    const long long n = s.size();
    const RescaledPointSet pts = rescaled_points(s, n + 1);
    for (Complex z : {Complex(0.5, 0.5), Complex(-1.5, 1.0), Complex(1.0, -2.0), Complex(2.0, 2.0)}) {
      if (!(std::abs(z) < 0.25 * static_cast<double>(n))) continue;
      const XiEvaluation d = xi_direct(s, z);
      const XiEvaluation p = xi_product(pts, z, n);
      const double excess = std::abs(d.value - p.value) - *p.tail_bound;
      const double scale = std::max(1.0, std::abs(d.value));
      t.add(std::max(0.0, excess) / scale, excess <= 1e-10 * scale);
    }
  }));

  out.push_back(per_spectrum_check(run, "xi_at_origin", 0.0, run.replicas.size(),
                                   [&](const Spectrum& s, std::size_t, Tally& t) {
    const RescaledPointSet pts = rescaled_points(s, s.size());
    const Complex d = xi_direct(s, 0.0).value;
    const Complex p = xi_product(pts, 0.0, s.size()).value;
    const double res = std::max(std::abs(d - 1.0), std::abs(p - 1.0));
    t.add(res, res == 0.0);
  }));

  out.push_back(per_spectrum_check(run, "xi_zero_set", 1e-9, kIdentityReplicaCap,
                                   [&](const Spectrum& s, std::size_t, Tally& t) {
    const long long n = s.size();
    const RescaledPointSet pts = rescaled_points(s, n);
    const double h = 1e-4;
    for (long long k = 1; k <= std::min<long long>(n, 8); ++k) {
      const Complex y(pts(k), 0.0);
      const double prod = std::abs(xi_product(pts, y, n).value);
      const double grad = std::abs(xi_direct(s, y + h).value - xi_direct(s, y - h).value) / (2 * h);
      const double res = std::abs(xi_direct(s, y).value) / std::max(grad, 1e-300);
      t.add(std::max(res, prod), prod == 0.0 && res <= 1e-9);
    }
  }));

  out.push_back(per_spectrum_check(run, "conjugation_symmetry", 1e-10, kIdentityReplicaCap,
                                   [&](const Spectrum& s, std::size_t, Tally& t) {
    const Spectrum c = s.conjugated();
    for (Complex z : {Complex(0.3, 0.7), Complex(-1.2, 0.4), Complex(1.9, -1.1)}) {
      const Complex a = xi_direct(c, -std::conj(z)).value;
      const Complex b = std::conj(xi_direct(s, z).value);
      const double res = std::abs(a - b) / std::max(1.0, std::abs(b));
      t.add(res, res <= 1e-10);
    }
  }));
}

void statistics_checks(const EnsembleRun& run, std::vector<CheckResult>& out) {
  const Eigen::Index big = run.max_dim();
  const std::vector<Spectrum> top = run.spectra_at(big);

  out.push_back(guarded("variance_slope", false, 0.25, [&](CheckResult& c) {
    std::vector<double> lengths;
    for (double a = 2; a <= std::min(64.0, static_cast<double>(big) / 8.0); a *= 2) lengths.push_back(a);
    if (lengths.size() < 2) fail(ErrorCode::InvalidArgument, "largest dim too small for A >= 2 arcs");
    const CountStatistics st = variance_profile(top, lengths);
    const double target = 1.0 / (M_PI * M_PI);
    c.max_residual = std::abs(st.slope - target) / target;
    c.count = st.replicas;
    c.passed = c.max_residual <= c.threshold;
  }));

  out.push_back(guarded("pair_correlation", false, 0.001, [&](CheckResult& c) {
    std::vector<RescaledPointSet> pts;
    for (const Spectrum& s : top) pts.push_back(rescaled_points(s, s.size()));
    const PairCorrelation pc = empirical_pair_correlation(pts, static_cast<double>(big) / 8.0, 40);
    c.max_residual = pc.p_value;
    c.count = pc.replicas;
    c.passed = pc.p_value > c.threshold;
  }));

  out.push_back(guarded("arg_supremum_median", false, 2.0, [&](CheckResult& c) {
    std::vector<double> ratios;
    for (const ArgRow& r : arg_statistics(top)) ratios.push_back(r.arg_sup_over_log_n);
    c.max_residual = median(ratios);
    c.count = ratios.size();
    c.passed = c.max_residual <= c.threshold;
  }));

  out.push_back(guarded("mgf_monte_carlo", false, 3.0, [&](CheckResult& c) {
    const MgfEstimate e = mgf_monte_carlo(run.spectra_at(run.manifest.dims.front()), 1.0);
    c.max_residual = std::abs(e.z_score);
    c.count = run.replicas.size();
    c.passed = c.max_residual <= c.threshold;
  }));

  out.push_back(guarded("chernoff_tail", true, 0.0, [&](CheckResult& c) {
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    c.passed = true;
    c.max_residual = -INFINITY;
    for (Eigen::Index n : run.manifest.dims)
      for (const TailRow& row : chernoff_tails(run.spectra_at(n), xs)) {
        c.max_residual = std::max(c.max_residual, row.empirical - row.bound);
        c.passed = c.passed && row.empirical <= row.bound;
        ++c.count;
      }
  }));

  out.push_back(guarded("deviation_stability", false, 2.0, [&](CheckResult& c) {
    const long long window = std::max<long long>(1, big / 2);
    const double p99_top = quantile(deviation_statistics(top, window), 0.99);
    if (!std::isfinite(p99_top)) fail(ErrorCode::FormulaInconsistency, "deviation statistic is not finite");
    c.count = top.size();
    c.max_residual = 1.0;
    if (run.manifest.dims.size() >= 2) {
      const Eigen::Index half = run.manifest.dims[run.manifest.dims.size() - 2];
      const double p99_half =
          quantile(deviation_statistics(run.spectra_at(half), std::max<long long>(1, half / 2)), 0.99);
      c.max_residual = std::max(p99_top / p99_half, p99_half / p99_top);
    }
    c.passed = c.max_residual <= c.threshold;
  }));

  out.push_back(guarded("coupling_slope", false, -0.25, [&](CheckResult& c) {
    std::vector<std::vector<Spectrum>> small;
    for (Eigen::Index n : run.manifest.dims)
      if (n >= 16 && n < big) small.push_back(run.spectra_at(n));
    if (small.size() < 2) fail(ErrorCode::InvalidArgument, "coupling slope needs two dims >= 16 below the largest");
    const ScalingSummary s = coupling_medians(small, top, 1);
    c.max_residual = s.log_log_slope;
    c.count = top.size();
    c.passed = s.strictly_decreasing && s.log_log_slope <= c.threshold;
  }));
}

}  // namespace

bool VerifyReport::hard_ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.hard || c.passed; });
}

VerifyReport run_verify(const EnsembleRun& run, const std::string& suite) {
  if (suite != "identities" && suite != "statistics" && suite != "all")
    fail(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
  if (run.replicas.size() != run.manifest.replicas)
    fail(ErrorCode::IncompleteRun, "run holds fewer replicas than its manifest");
  VerifyReport report;
  report.suite = suite;
  report.manifest_hash = run.hash;
  if (suite != "statistics") identity_checks(run, report.checks);
  if (suite != "identities") statistics_checks(run, report.checks);
  return report;
}

std::string report_to_json(const VerifyReport& report) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["manifest_hash"] = report.manifest_hash;
  j["hard_ok"] = report.hard_ok();
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::json e = {{"name", c.name},
                        {"hard", c.hard},
                        {"passed", c.passed},
                        {"max_residual", std::isfinite(c.max_residual) ? nlohmann::json(c.max_residual) : nlohmann::json()},
                        {"threshold", c.threshold},
                        {"count", c.count}};
    e["error"] = c.error ? nlohmann::json(*c.error) : nlohmann::json();
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j.dump(2);
}

}  // namespace xilimit
