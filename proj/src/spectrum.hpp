#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace xilimit {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kTieTolerance = 1e-12;

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t replica_id = 0;
  bool operator==(const Provenance&) const = default;
};

// Eigenangles theta_1 < ... < theta_n of a unitary, all in (0, 2 pi), extended
// to Z by theta_{k+n} = theta_k + 2 pi.
class Spectrum {
 public:
  // Validates strict increase and the open range (0, 2 pi).
  static Spectrum from_angles(std::vector<double> theta,
                              std::optional<Provenance> provenance = std::nullopt);

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(theta_.size()); }
  std::span<const double> angles() const noexcept { return theta_; }
  // 1-based, k in 1..n.
  double angle(Eigen::Index k) const { return theta_[static_cast<std::size_t>(k - 1)]; }
  // Any k in Z.
  double periodized_angle(long long k) const;
  // min over k of the distance from theta_k to {0, 2 pi}.
  double gap_to_one() const noexcept { return gap_to_one_; }
  // Smallest cyclic spacing between consecutive angles.
  double min_spacing() const noexcept { return min_spacing_; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  // Spectrum of the complex-conjugated matrix: angles 2 pi - theta.
  Spectrum conjugated() const;

 private:
  Spectrum() = default;

  std::vector<double> theta_;
  double gap_to_one_ = 0.0;
  double min_spacing_ = 0.0;
  std::optional<Provenance> provenance_;
};

enum class EigenMethod {
  // Dense complex Schur eigensolver, eigenvalues projected radially.
  General,
  // Hermitian eigenvalues of the Cayley transform i (I - V)(I + V)^{-1} of a
  // rotated V = e^{i beta} U, with the pole placed in the widest spectral gap.
  Cayley,
};

struct EigenOptions {
  EigenMethod method = EigenMethod::Cayley;
  bool check_unitarity = true;
};

Spectrum eigenangles(const Eigen::Ref<const Eigen::MatrixXcd>& u, EigenOptions options = {},
                     std::optional<Provenance> provenance = std::nullopt);

// y_k = n theta_k / (2 pi) over k in [-K, K], or an explicit list of values.
class RescaledPointSet {
 public:
  // Periodized points of a spectrum; window K >= 1 bounds the indices used.
  static RescaledPointSet from_spectrum(const Spectrum& spec, long long window);
  // Explicit values for indices -K..K (values.size() == 2K + 1).
  static RescaledPointSet from_values(std::vector<double> values);

  long long window() const noexcept { return window_; }
  // 0 for explicit point sets.
  Eigen::Index source_n() const noexcept { return n_; }
  bool periodic() const noexcept { return n_ > 0; }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  // y_k; periodic sets accept any k, explicit sets require |k| <= K.
  double operator()(long long k) const;
  // Base spectrum (periodic sets only).
  const Spectrum& spectrum() const;

 private:
  RescaledPointSet() = default;

  Eigen::Index n_ = 0;
  long long window_ = 0;
  std::shared_ptr<const std::vector<double>> base_;  // y_1..y_n, or y_{-K}..y_K
  std::shared_ptr<const Spectrum> spectrum_;
  std::optional<Provenance> provenance_;
};

RescaledPointSet rescaled_points(const Spectrum& spec, long long window);

}  // namespace xilimit
