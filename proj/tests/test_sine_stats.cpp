#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "error.hpp"
#include "isometry.hpp"
#include "oracles.hpp"
#include "rational.hpp"
#include "sine_stats.hpp"

using namespace xilimit;

namespace {

Spectrum haar_spectrum(std::uint64_t seed, Eigen::Index n, std::uint64_t replica = 0) {
  VirtualIsometryChain c(seed, replica);
  c.grow_to(n);
  return eigenangles(c.matrix(), {}, Provenance{seed, replica});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

RescaledPointSet lattice(long long K, double shift = 0.0) {
  std::vector<double> v;
  for (long long k = -K; k <= K; ++k) v.push_back(static_cast<double>(k) + shift);
  return RescaledPointSet::from_values(v);
}

}  // namespace

TEST(CountInInterval, Basics) {
  const Spectrum s = haar_spectrum(1, 64);
  const RescaledPointSet y = rescaled_points(s, 128);
  const double mid = 0.5 * (y(3) + y(4));
  EXPECT_EQ(count_in_interval(y, mid, mid), 0);
  EXPECT_EQ(count_in_interval(y, 0.0, 64.0), 64);
  EXPECT_EQ(count_in_interval(y, y(2), y(5)), 4);
  EXPECT_EQ(code_of([&] { count_in_interval(y, 0.0, 1000.0); }), ErrorCode::WindowTooSmall);
  EXPECT_THROW(count_in_interval(y, 2.0, 1.0), Error);
}

TEST(VarianceProfile, Preconditions) {
  std::vector<Spectrum> few;
  for (std::uint64_t r = 0; r < 10; ++r) few.push_back(haar_spectrum(2, 64, r));
  const std::vector<double> lengths{2, 4};
  EXPECT_EQ(code_of([&] { variance_profile(few, lengths); }), ErrorCode::InsufficientReplicas);
  std::vector<Spectrum> many;
  for (std::uint64_t r = 0; r < 100; ++r) many.push_back(haar_spectrum(2, 32, r));
  const std::vector<double> too_long{2, 8};
  EXPECT_EQ(code_of([&] { variance_profile(many, too_long); }), ErrorCode::InvalidArgument);
  const CountStatistics st = variance_profile(many, lengths);
  for (double v : st.variance) EXPECT_GE(v, 0.0);
  for (const auto& row : st.counts)
    for (long long c : row) EXPECT_GE(c, 0);
  EXPECT_EQ(st.replicas, 100u);
}

TEST(Deviation, Fixtures) {
  EXPECT_EQ(deviation_profile(lattice(50), 50), 0.0);
  std::vector<double> v;
  for (long long k = -50; k <= 50; ++k) v.push_back(static_cast<double>(k));
  v.back() = 50 + std::log(52.0);
  EXPECT_NEAR(deviation_profile(RescaledPointSet::from_values(v), 50), 1.0, 1e-15);
  EXPECT_THROW(deviation_profile(lattice(5), 6), Error);
}

TEST(Coupling, ContractErrors) {
  const Spectrum a = haar_spectrum(3, 64, 0), b = haar_spectrum(3, 64, 1);
  EXPECT_EQ(code_of([&] { coupling_error_profile(a, b, 2, 0.01); }), ErrorCode::NotCoupled);
  EXPECT_EQ(code_of([&] { coupling_error_profile(a, Spectrum::from_angles({1.0}), 2, 0.01); }),
            ErrorCode::NotCoupled);
  VirtualIsometryChain c(4, 0);
  c.grow_to(64);
  const Spectrum s64 = eigenangles(c.matrix(), {}, Provenance{4, 0});
  c.grow_to(512);
  const Spectrum s512 = eigenangles(c.matrix(), {}, Provenance{4, 0});
  EXPECT_EQ(code_of([&] { coupling_error_profile(s64, s512, 3, 0.01); }), ErrorCode::InvalidArgument);
  const CouplingProfile p = coupling_error_profile(s64, s512, 2, 0.01);
  ASSERT_EQ(p.rows.size(), 5u);
  for (const CouplingRow& r : p.rows) {
    EXPECT_LE(r.abs_error, p.fitted_constant * r.envelope * (1 + 1e-12));
    EXPECT_NEAR(r.envelope, (1.0 + r.k * r.k) * std::pow(64.0, -1.0 / 3.0 + 0.01), 1e-15);
  }
}

TEST(SineKernel, Determinants) {
  const std::vector<double> one{0.7}, same{0.3, 0.3}, half{0.0, 0.5};
  EXPECT_EQ(sine_kernel_determinant(one), 1.0);
  EXPECT_NEAR(sine_kernel_determinant(same), 0.0, 1e-15);
  EXPECT_NEAR(sine_kernel_determinant(half), 1.0 - 4.0 / (M_PI * M_PI), 1e-15);
  EXPECT_NEAR(sine_kernel_determinant(half), 0.59472, 1e-5);
  EXPECT_THROW(sine_kernel_determinant(std::vector<double>{}), Error);
}

TEST(SineKernel, PermutationSymmetricAndNonnegative) {
  RngStream r = derive_stream(5, 0, "verify");
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x;
    for (int i = 0; i < 5; ++i) x.push_back(4.0 * r.uniform());
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_NEAR(sine_kernel_determinant(x), sine_kernel_determinant(sorted), 1e-13);
    EXPECT_GE(sine_kernel_determinant(x), -1e-12);
  }
}

TEST(PairCorrelation, Preconditions) {
  std::vector<RescaledPointSet> few;
  for (std::uint64_t r = 0; r < 20; ++r) few.push_back(rescaled_points(haar_spectrum(6, 64, r), 64));
  EXPECT_EQ(code_of([&] { empirical_pair_correlation(few, 8.0, 40); }), ErrorCode::InsufficientReplicas);
  EXPECT_NEAR(sine_pair_correlation(0.0), 0.0, 1e-15);
  EXPECT_NEAR(sine_pair_correlation(0.5), 1.0 - 4.0 / (M_PI * M_PI), 1e-15);
}

TEST(RAlpha, BaseCases) {
  const RationalFunction r0 = r_alpha(0);
  EXPECT_EQ(r0.numerator, (IntPoly{1, 1}));
  EXPECT_EQ(r0.denominator, (IntPoly{-1, 1}));
  EXPECT_EQ(r0.pole_order, 1);
  const RationalFunction r1 = r_alpha(1);
  EXPECT_EQ(r1.numerator, (IntPoly{0, -2}));
  EXPECT_EQ(r1.denominator, (IntPoly{1, -2, 1}));
  EXPECT_THROW(r_alpha(-1), Error);
  EXPECT_THROW(r_alpha(kMaxRAlpha + 1), Error);
  for (int a = 0; a <= kMaxRAlpha; ++a) {
    const RationalFunction r = r_alpha(a);
    EXPECT_EQ(poly_degree(r.denominator), a + 1);
    EXPECT_LE(poly_degree(r.numerator), a + 1);
  }
}

TEST(RAlpha, MatchesNumericalDifferentiation) {
  // With X = e^t, X d/dX = d/dt and (X+1)/(X-1) = coth(t/2).
  auto f = [](std::complex<double> t) { return 1.0 / std::tanh(0.5 * t); };
  const std::complex<double> t0(std::log(2.0), 0.0);
  for (int a = 0; a <= 5; ++a) {
    const std::complex<double> ref = oracle::cauchy_derivative(f, t0, a);
    const std::complex<double> got = r_alpha(a)(2.0);
    EXPECT_NEAR(std::abs(got - ref), 0.0, 1e-7 * std::max(1.0, std::abs(ref))) << "alpha=" << a;
  }
}

TEST(RAlpha, LatticeIdentity) {
  for (int a = 0; a <= 3; ++a)
    for (double x : {0.3, 0.7, 2.1, 5.9})
      EXPECT_NEAR(lattice_sum_closed_form(a, x), oracle::lattice_sum(a, x), 1e-6) << a << " " << x;
  EXPECT_NEAR(lattice_sum_closed_form(1, 0.7), 1.0 / (4 * std::pow(std::sin(0.35), 2)), 1e-12);
}

TEST(PowerSumDirect, HalfIntegerFixture) {
  // sum_{k in Z} (k + 1/2)^{-2} = pi^2.
  const RescaledPointSet y = lattice(10000, 0.5);
  const PowerSumResult p = power_sum_direct(y, 2, 9999);
  EXPECT_NEAR(*p.direct, M_PI * M_PI, 2.1e-4);
  EXPECT_LE(std::abs(*p.direct - M_PI * M_PI), *p.tail_bound);
}

TEST(PowerSumDirect, IntegerFixture) {
  // y_k = k off the origin; the origin slot holds 1/2, whose term 4 is removed.
  std::vector<double> v;
  for (long long k = -10000; k <= 10000; ++k) v.push_back(k == 0 ? 0.5 : static_cast<double>(k));
  const PowerSumResult p = power_sum_direct(RescaledPointSet::from_values(v), 2, 10000);
  EXPECT_LE(std::abs((*p.direct - 4.0) - M_PI * M_PI / 3), 2e-4);
}

TEST(PowerSumDirect, SymmetricPairsCancel) {
  std::vector<double> v;
  for (long long k = -100; k <= 100; ++k) v.push_back(k == 0 ? 0.25 : static_cast<double>(k) * 1.37);
  const PowerSumResult p = power_sum_direct(RescaledPointSet::from_values(v), 1, 100);
  EXPECT_EQ(*p.direct, 4.0);
  EXPECT_FALSE(p.tail_bound);
  EXPECT_THROW(power_sum_direct(RescaledPointSet::from_values(v), 1, 101), Error);
  EXPECT_THROW(power_sum_direct(RescaledPointSet::from_values(v), 0, 10), Error);
}

TEST(PowerSumDirect, AbsoluteConvergenceOnHaarReplica) {
  const Spectrum s = haar_spectrum(7, 512);
  const RescaledPointSet y = rescaled_points(s, 10000);
  EXPECT_LT(std::abs(*power_sum_direct(y, 3, 1000).direct - *power_sum_direct(y, 3, 10000).direct), 1e-6);
}

TEST(PowerSumClosedForm, SingleEigenvalue) {
  const Spectrum s = Spectrum::from_angles({M_PI});
  const PowerSumResult p = power_sum_closed_form(s, 1);
  EXPECT_EQ(p.alpha, 2);
  EXPECT_NEAR(*p.closed_form, M_PI * M_PI, 1e-12);
  EXPECT_NEAR(*p.closed_form, oracle::shifted_integer_sum(0.5, 2), 1e-5);
}

TEST(PowerSumClosedForm, AgainstDirectOnHaarReplica) {
  const Spectrum s = haar_spectrum(8, 64);
  const RescaledPointSet y = rescaled_points(s, 100001);
  for (int a = 1; a <= 3; ++a) {
    const PowerSumResult c = power_sum_closed_form(s, a);
    const PowerSumResult d = power_sum_direct(y, a + 1, 100000);
    EXPECT_LE(std::abs(*c.closed_form - *d.direct), *d.tail_bound + 1e-10 * std::abs(*c.closed_form)) << a;
    EXPECT_LE(std::abs(c.imag_part), 1e-10 * std::max(1.0, std::abs(*c.closed_form)));
  }
}

TEST(PowerSumClosedForm, PoleProximity) {
  EXPECT_EQ(code_of([] { power_sum_closed_form(Spectrum::from_angles({5e-11, 3.0}), 1); }),
            ErrorCode::PoleProximity);
  EXPECT_THROW(power_sum_closed_form(Spectrum::from_angles({1.0}), 0), Error);
}

TEST(SymmetricInverseSum, AgainstPairedLattice) {
  const Spectrum s = haar_spectrum(9, 16);
  const RescaledPointSet y = rescaled_points(s, 1000000);
  oracle::Sum sum;
  for (long long k = 1000000; k >= 1; --k) sum.add(1.0 / y(k) + 1.0 / y(-k));
  sum.add(1.0 / y(0));
  EXPECT_NEAR(symmetric_inverse_sum(s), sum.value(), 1e-5);
}
