#include <gtest/gtest.h>

#include <cmath>

#include "error.hpp"
#include "rng.hpp"
#include "special.hpp"

using namespace xilimit;

namespace {

std::vector<std::uint64_t> draws(RngStream s, int count) {
  std::vector<std::uint64_t> v;
  for (int i = 0; i < count; ++i) v.push_back(s.next_u64());
  return v;
}

int equal_positions(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  int same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return same;
}

double beta_1_7_cdf(double t) { return 1.0 - std::pow(1.0 - t, 7); }

}  // namespace

TEST(RngStream, SameTripleSameSequence) {
  EXPECT_EQ(draws(derive_stream(7, 0, "chain"), 10000), draws(derive_stream(7, 0, "chain"), 10000));
}

TEST(RngStream, ReplicaChangesSequence) {
  EXPECT_EQ(equal_positions(draws(derive_stream(7, 0, "chain"), 10000), draws(derive_stream(7, 1, "chain"), 10000)), 0);
}

TEST(RngStream, TagChangesSequence) {
  EXPECT_EQ(equal_positions(draws(derive_stream(7, 0, "chain"), 10000), draws(derive_stream(7, 0, "stats"), 10000)), 0);
}

TEST(RngStream, CopyContinuesIndependently) {
  RngStream a = derive_stream(3, 4, "verify");
  a.next_u64();
  RngStream b = a;
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, UniformInUnitInterval) {
  RngStream s = derive_stream(1, 2, "stats");
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Sphere, ScalarIsUnimodular) {
  RngStream s = derive_stream(11, 0, "chain");
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(std::abs(sample_unit_sphere(s, 1)[0]), 1.0, 1e-12);
}

TEST(Sphere, UnitNorm) {
  RngStream s = derive_stream(12, 0, "chain");
  for (int i = 0; i < 100; ++i) EXPECT_NEAR(sample_unit_sphere(s, 4).entries().norm(), 1.0, 1e-12);
}

TEST(Sphere, RejectsBadInput) {
  RngStream s = derive_stream(12, 0, "chain");
  EXPECT_THROW(sample_unit_sphere(s, 0), Error);
  EXPECT_THROW(UnitVector(Eigen::VectorXcd::Ones(3)), Error);
}

TEST(Sphere, FirstCoordinateMeanIsOneOverN) {
  RngStream s = derive_stream(13, 0, "stats");
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) v.push_back(std::norm(sample_unit_sphere(s, 8)[0]));
  const SampleMoments m = moments(v);
  EXPECT_LE(std::abs(m.mean - 0.125), 3 * m.stderr_mean);
}

TEST(Sphere, IsotropyAgainstFixedDirection) {
  // |<x, e_1>|^2 and |<x, v>|^2 must have the same law, Beta(1, n - 1).
  RngStream s1 = derive_stream(14, 0, "stats");
  RngStream s2 = derive_stream(14, 1, "stats");
  RngStream sv = derive_stream(14, 2, "stats");
  const Eigen::VectorXcd v = sample_unit_sphere(sv, 8).entries();
  std::vector<double> a, b;
  for (int i = 0; i < 10000; ++i) {
    a.push_back(std::norm(sample_unit_sphere(s1, 8)[0]));
    b.push_back(std::norm(v.dot(sample_unit_sphere(s2, 8).entries())));
  }
  EXPECT_GT(ks_test_two_sample(a, b).p_value, 0.01);
  EXPECT_GT(ks_test(a, beta_1_7_cdf).p_value, 0.01);
  EXPECT_GT(ks_test(b, beta_1_7_cdf).p_value, 0.01);
}
