// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: xilimit_acceptance [reference_run_dir]
// Without a directory the reference ensemble is grown in memory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "arg_counting.hpp"
#include "ensemble.hpp"
#include "error.hpp"
#include "isometry.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "sine_stats.hpp"
#include "special.hpp"
#include "xi.hpp"

using namespace xilimit;

namespace {

// Reference ensemble.
constexpr std::uint64_t kReferenceSeed = 20261017;
constexpr std::uint64_t kReferenceReplicas = 400;

// Tolerances and budgets.
constexpr double kCountResidual = 1e-6;
constexpr double kIndexResidual = 1e-8;
constexpr double kFunctionalPerN = 1e-10;
constexpr double kMgfSigmas = 3.0;
constexpr double kProductGap = 1e-6;
constexpr double kVarianceRelErr = 0.25;
constexpr double kPairPValue = 1e-3;
constexpr double kDeviationRatio = 2.0;
constexpr double kCouplingSlope = -0.25;
constexpr double kLatticeTol = 1e-6;
constexpr double kClosedFormRel = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Spectrum grow_spectrum(std::uint64_t seed, std::uint64_t replica, Eigen::Index n) {
  VirtualIsometryChain c(seed, replica);
  c.grow_to(n);
  return eigenangles(c.matrix(), {}, Provenance{seed, replica});
}

std::vector<Spectrum> grow_many(std::uint64_t seed, std::size_t count, Eigen::Index n) {
  std::vector<std::optional<Spectrum>> tmp(count);
  parallel_for(count, [&](std::size_t r) { tmp[r] = grow_spectrum(seed, r, n); });
  std::vector<Spectrum> out;
  out.reserve(count);
  for (auto& s : tmp) out.push_back(std::move(*s));
  return out;
}

std::vector<Spectrum> first(const EnsembleRun& run, Eigen::Index n, std::size_t count) {
  std::vector<Spectrum> all = run.spectra_at(n);
  if (all.size() > count) all.erase(all.begin() + static_cast<std::ptrdiff_t>(count), all.end());
  return all;
}

double p99(std::vector<double> v) { return quantile(std::move(v), 0.99); }

Outcome exact_counting(const EnsembleRun& ref) {
  double worst = 0.0;
  long long arcs = 0, mismatches = 0;
  for (Eigen::Index n : {16, 64, 256}) {
    for (const Spectrum& s : first(ref, n, 20)) {
      RngStream rng = derive_stream(ref.manifest.seed, s.provenance()->replica_id * 65536 + n, tags::kVerify);
      for (int i = 0; i < 1000; ++i) {
        const double a = kTwoPi * rng.uniform(), b = kTwoPi * rng.uniform();
        double da = 0, db = 0;
        try {
          da = im_log_Z(s, a);
          db = im_log_Z(s, b);
        } catch (const Error&) {
          --i;
          continue;
        }
        const double len = b >= a ? b - a : b - a + kTwoPi;
        const double value = static_cast<double>(n) * len / kTwoPi - (db - da) / M_PI;
        worst = std::max(worst, std::abs(value - std::round(value)));
        if (count_zeros_arc(s, a, b) != count_angles_in_arc(s, a, b)) ++mismatches;
        ++arcs;
      }
    }
  }
  return {mismatches == 0 && worst < kCountResidual,
          fmt("%lld arcs, %lld mismatches, max pre-round residual %.2e", arcs, mismatches, worst)};
}

Outcome index_identity(const EnsembleRun& ref) {
  double worst = 0.0;
  long long checks = 0;
  for (const Spectrum& s : first(ref, 32, 20))
    for (long long k = -32; k <= 64; ++k) {
      worst = std::max(worst, index_identity_residual(s, k));
      ++checks;
    }
  return {worst <= kIndexResidual, fmt("%lld indices, max residual %.2e", checks, worst)};
}

Outcome functional_equation(const EnsembleRun& ref) {
  double worst = 0.0;
  long long checks = 0;
  for (Eigen::Index n : {16, 64})
    for (const Spectrum& s : first(ref, n, 20)) {
      RngStream rng = derive_stream(ref.manifest.seed, s.provenance()->replica_id * 65536 + n + 1, tags::kVerify);
      for (int i = 0; i < 100; ++i) {
        const double radius = std::exp(0.2 * rng.uniform() - 0.1);
        const Complex z = std::polar(radius, kTwoPi * rng.uniform());
        worst = std::max(worst, functional_equation_residual(s, z) / static_cast<double>(n));
        ++checks;
      }
    }
  return {worst <= kFunctionalPerN, fmt("%lld points, max residual/n %.2e", checks, worst)};
}

Outcome mgf_and_tails() {
  const std::vector<Spectrum> s16 = grow_many(kReferenceSeed + 1, 20000, 16);
  bool ok = true;
  std::string detail;
  for (double lambda : {0.5, 1.0, 2.0}) {
    const MgfEstimate e = mgf_monte_carlo(s16, lambda);
    ok = ok && std::abs(e.z_score) <= kMgfSigmas;
    detail += fmt("lambda=%g z=%+.2f; ", lambda, e.z_score);
  }
  std::vector<double> xs;
  for (double x = 0.25; x <= 6.0; x += 0.25) xs.push_back(x);
  double worst_margin = -1.0;
  for (const TailRow& t : chernoff_tails(s16, xs)) worst_margin = std::max(worst_margin, t.empirical - t.bound);
  const std::vector<Spectrum> s64 = grow_many(kReferenceSeed + 2, 10000, 64);
  const std::vector<double> x3{3.0};
  const TailRow t64 = chernoff_tails(s64, x3).front();
  worst_margin = std::max(worst_margin, t64.empirical - t64.bound);
  ok = ok && worst_margin <= 0.0;
  detail += fmt("max(empirical - bound) %.3f; n=64 x=3: %.4f <= %.4f", worst_margin, t64.empirical, t64.bound);
  return {ok, detail};
}

Outcome product_representation(const EnsembleRun& ref) {
  GridSpec g;
  const std::vector<Complex> zs = grid_points(g);
  double gap_full = 0.0, rel_full = 0.0;
  bool decreasing = true, within_bound = true;
  std::string study;
  for (const Spectrum& s : first(ref, 256, 5)) {
    const RescaledPointSet y = rescaled_points(s, 256);
    std::vector<Complex> direct;
    for (const Complex& z : zs) direct.push_back(xi_direct(s, z).value);
    auto sup_gap = [&](long long a, double* bound) {
      double worst = 0.0, b = 0.0;
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const XiEvaluation p = xi_product(y, zs[i], a);
        worst = std::max(worst, std::abs(p.value - direct[i]));
        b = std::max(b, *p.tail_bound);
      }
      if (bound) *bound = b;
      return worst;
    };
    gap_full = std::max(gap_full, sup_gap(256, nullptr));
    for (std::size_t i = 0; i < zs.size(); ++i)
      rel_full = std::max(rel_full, std::abs(xi_product(y, zs[i], 256).value - direct[i]) / std::abs(direct[i]));
    double prev = INFINITY;
    for (long long a : {8, 16, 32, 64, 128}) {
      double bound = 0.0;
      const double gap = sup_gap(a, &bound);
      decreasing = decreasing && gap < prev;
      within_bound = within_bound && gap <= bound;
      prev = gap;
      if (s.provenance()->replica_id == 0) study += fmt(" A=%lld:%.3g", a, gap);
    }
  }
  return {gap_full <= kProductGap && decreasing && within_bound,
          fmt("sup gap at A=n %.3e (limit %.0e, relative %.3e); decreasing %s; within log A/A bound %s; "
              "replica 0:%s",
              gap_full, kProductGap, rel_full, decreasing ? "yes" : "no", within_bound ? "yes" : "no", study.c_str())};
}

Outcome xi_convergence(const EnsembleRun& ref) {
  std::vector<std::vector<Spectrum>> small;
  for (Eigen::Index n : {32, 64, 128, 256}) small.push_back(first(ref, n, 50));
  const std::vector<Spectrum> large = first(ref, 512, 50);
  const ScalingSummary sum = xi_convergence_medians(small, large, GridSpec{});
  std::string medians;
  for (const ScalingRow& r : sum.rows) medians += fmt(" n=%lld:%.4g", static_cast<long long>(r.n), r.median);
  return {sum.strictly_decreasing, fmt("median sup gaps%s", medians.c_str())};
}

Outcome count_variance(const EnsembleRun& ref) {
  const std::vector<double> lengths{2, 4, 8, 16, 32, 64};
  const CountStatistics st = variance_profile(ref.spectra_at(512), lengths);
  const double target = 1.0 / (M_PI * M_PI);
  const double rel = std::abs(st.slope - target) / target;
  return {rel <= kVarianceRelErr, fmt("slope %.5f (95%% CI %.5f..%.5f), target %.5f, relative error %.3f",
                                      st.slope, st.slope_lo, st.slope_hi, target, rel)};
}

Outcome pair_correlation(const EnsembleRun& ref) {
  std::vector<RescaledPointSet> pts;
  for (const Spectrum& s : ref.spectra_at(512)) pts.push_back(rescaled_points(s, 512));
  const PairCorrelation pc = empirical_pair_correlation(pts, 512.0 / 8.0, 40);
  return {pc.p_value > kPairPValue,
          fmt("chi2 %.2f on %.0f dof, p = %.4f, %zu replicas", pc.chi_square, pc.dof, pc.p_value, pc.replicas)};
}

Outcome deviation_and_coupling(const EnsembleRun& ref) {
  ExperimentManifest m;
  m.seed = ref.manifest.seed;
  m.replicas = 50;
  m.dims = {1024};
  const EnsembleRun big = grow_ensemble(m);
  const double q512 = p99(deviation_statistics(first(ref, 512, 200), 256));
  const double q1024 = p99(deviation_statistics(big.spectra_at(1024), 512));
  const double ratio = q1024 / q512;
  const bool stable = std::isfinite(ratio) && ratio <= kDeviationRatio && ratio >= 1.0 / kDeviationRatio;

  std::vector<std::vector<Spectrum>> small;
  for (Eigen::Index n : {64, 128, 256}) small.push_back(first(ref, n, 50));
  const ScalingSummary cs = coupling_medians(small, first(ref, 512, 50), 1);
  return {stable && cs.log_log_slope <= kCouplingSlope,
          fmt("deviation p99 %.3f (n=512) -> %.3f (n=1024), ratio %.3f; coupling log-log slope %.3f (decreasing %s)",
              q512, q1024, ratio, cs.log_log_slope, cs.strictly_decreasing ? "yes" : "no")};
}

Outcome power_sums(const EnsembleRun& ref) {
  double lattice_worst = 0.0;
  for (int alpha = 0; alpha <= 3; ++alpha)
    for (double x : {0.3, 0.7, 2.1, 5.9})
      lattice_worst = std::max(lattice_worst, std::abs(lattice_sum_closed_form(alpha, x) - oracle::lattice_sum(alpha, x)));
  double excess = 0.0;
  bool closed_ok = true;
  for (const Spectrum& s : first(ref, 64, 3)) {
    const RescaledPointSet y = rescaled_points(s, 100001);
    for (int alpha = 1; alpha <= 3; ++alpha) {
      const PowerSumResult c = power_sum_closed_form(s, alpha);
      const PowerSumResult d = power_sum_direct(y, alpha + 1, 100000);
      const double over = std::abs(*c.closed_form - *d.direct) - *d.tail_bound;
      const double scale = std::max(1.0, std::abs(*c.closed_form));
      closed_ok = closed_ok && over <= kClosedFormRel * scale;
      excess = std::max(excess, over / scale);
    }
  }
  return {lattice_worst <= kLatticeTol && closed_ok,
          fmt("lattice identity max error %.2e; closed form vs direct max excess over tail bound %.2e", lattice_worst,
              excess)};
}

Outcome growth_bounds(const EnsembleRun& ref) {
  std::vector<double> xs;
  for (double x = 1; x <= 40; x += 1) {
    xs.push_back(x);
    xs.push_back(-x);
  }
  double lower = INFINITY, upper = 0.0;
  for (const Spectrum& s : first(ref, 512, 20)) {
    const RescaledPointSet y = rescaled_points(s, 512);
    const GrowthProfile g = growth_profile(y, xs, 512, 5.0);
    lower = std::min(lower, g.lower_constant);
    upper = std::max(upper, g.upper_constant);
    for (double x : xs) {
      const double v = log_abs_product(y, Complex(x, 0.0), 512);
      upper = std::max(upper, v / (std::abs(x) * std::log(2.0 + std::abs(x))));
    }
  }
  return {lower > 0.0 && upper > 0.0 && std::isfinite(upper),
          fmt("fitted lower constant %.4f on |x| in [5, 40]; fitted upper C %.4f over |z| <= 40", lower, upper)};
}

}  // namespace

int main(int argc, char** argv) {
  using clock = std::chrono::steady_clock;
  EnsembleRun ref;
  try {
    if (argc > 1) {
      ref = load_run(argv[1]);
    } else {
      ExperimentManifest m;
      m.seed = kReferenceSeed;
      m.replicas = kReferenceReplicas;
      m.dims = {16, 32, 64, 128, 256, 512};
      ref = grow_ensemble(m);
    }
  } catch (const std::exception& e) {
    std::printf("FAIL reference ensemble unavailable: %s\n", e.what());
    return 1;
  }
  if (ref.replicas.size() < kReferenceReplicas || ref.max_dim() != 512) {
    std::printf("FAIL reference ensemble needs %llu replicas up to n=512\n",
                static_cast<unsigned long long>(kReferenceReplicas));
    return 1;
  }

  const std::vector<Criterion> criteria{
      {1, "exact zero counting on arcs", 60, [&] { return exact_counting(ref); }},
      {2, "index identity", 60, [&] { return index_identity(ref); }},
      {3, "functional equation", 60, [&] { return functional_equation(ref); }},
      {4, "moment generating function and tails", 600, [] { return mgf_and_tails(); }},
      {5, "product representation", 120, [&] { return product_representation(ref); }},
      {6, "convergence of xi_n", 1800, [&] { return xi_convergence(ref); }},
      {7, "count variance slope", 2700, [&] { return count_variance(ref); }},
      {8, "pair correlation", 2700, [&] { return pair_correlation(ref); }},
      {9, "deviation and coupling profiles", 1800, [&] { return deviation_and_coupling(ref); }},
      {10, "power sums and R_alpha", 300, [&] { return power_sums(ref); }},
      {11, "growth bounds", 120, [&] { return growth_bounds(ref); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s [%2d] %s: %s; %.1f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
