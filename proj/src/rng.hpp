#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace xilimit {

using Complex = std::complex<double>;

// Purpose tags used by the library. Each (seed, replica, tag) triple owns an
// independent stream.
namespace tags {
inline constexpr std::string_view kChain = "chain";
inline constexpr std::string_view kStats = "stats";
inline constexpr std::string_view kVerify = "verify";
inline constexpr std::string_view kBootstrap = "bootstrap";
}  // namespace tags

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Deterministic random stream keyed by (master_seed, replica_id, purpose_tag).
// Copyable; a copy continues the same sequence independently.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t replica_id,
            std::string_view purpose_tag);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t replica_id() const noexcept { return replica_id_; }
  const std::string& purpose_tag() const noexcept { return purpose_tag_; }
  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  double normal() { return normal_(engine_); }
  // Variance-one complex normal (g1 + i g2) / sqrt(2).
  Complex complex_normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t replica_id_;
  std::string purpose_tag_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replica_id,
                        std::string_view purpose_tag);

// A point on the unit sphere of C^n.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXcd entries);

  Eigen::Index dim() const noexcept { return entries_.size(); }
  const Eigen::VectorXcd& entries() const noexcept { return entries_; }
  Complex operator[](Eigen::Index i) const { return entries_[i]; }

 private:
  Eigen::VectorXcd entries_;
};

// Uniform point on the complex unit sphere by normalizing a complex Gaussian.
UnitVector sample_unit_sphere(RngStream& stream, Eigen::Index n);

}  // namespace xilimit
