#include "rng.hpp"

#include <cmath>

#include "error.hpp"

namespace xilimit {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replica,
                         std::string_view tag) {
  std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix64(h ^ splitmix64(replica + 0x14057b7ef767814fULL));
  h = splitmix64(h ^ fnv1a64(tag));
  return h;
}

std::seed_seq make_seed_seq(std::uint64_t key) {
  return std::seed_seq{static_cast<std::uint32_t>(key),
                       static_cast<std::uint32_t>(key >> 32),
                       static_cast<std::uint32_t>(splitmix64(key)),
                       static_cast<std::uint32_t>(splitmix64(key) >> 32)};
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replica_id,
                     std::string_view purpose_tag)
    : master_seed_(master_seed),
      replica_id_(replica_id),
      purpose_tag_(purpose_tag),
      key_(stream_key(master_seed, replica_id, purpose_tag)) {
  auto seq = make_seed_seq(key_);
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53 random bits.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Complex RngStream::complex_normal() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return Complex(re, im) * M_SQRT1_2;
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_id,
                        std::string_view purpose_tag) {
  return RngStream(master_seed, replica_id, purpose_tag);
}

UnitVector::UnitVector(Eigen::VectorXcd entries) : entries_(std::move(entries)) {
  if (entries_.size() < 1) fail(ErrorCode::InvalidArgument, "unit vector must have dim >= 1");
  if (std::abs(entries_.norm() - 1.0) > 1e-12)
    fail(ErrorCode::InvalidArgument, "vector is not normalized");
}

UnitVector sample_unit_sphere(RngStream& stream, Eigen::Index n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "sphere dimension must be >= 1");
  Eigen::VectorXcd v(n);
  for (int attempt = 0; attempt < 2; ++attempt) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = stream.complex_normal();
    const double norm = v.norm();
    if (norm > 0.0 && std::isfinite(norm)) {
      v /= norm;
      return UnitVector(std::move(v));
    }
  }
  fail(ErrorCode::InvalidArgument, "zero-norm Gaussian draw twice in a row");
}

}  // namespace xilimit
