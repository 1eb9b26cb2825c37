#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rng.hpp"

namespace xilimit {

// Unitary R = I - w w^* / kappa with w = x - e_n and kappa = 1 - conj(x_n).
// It is the unique unitary with R e_n = x and rank(R - I) = 1.
struct Reflection {
  Eigen::VectorXcd w;
  Complex kappa;

  Eigen::Index dim() const noexcept { return w.size(); }
  // det R = -(1 - x_n) / (1 - conj(x_n)), unimodular.
  Complex determinant() const;
  Eigen::MatrixXcd dense() const;
};

Reflection reflection_from_target(const UnitVector& x);

// R * M in O(n^2) without forming R.
void apply_reflection_inplace(const Reflection& r, Eigen::Ref<Eigen::MatrixXcd> m);
Eigen::MatrixXcd apply_reflection(const Reflection& r, const Eigen::MatrixXcd& m);

// max |(U^* U - I)_{ij}|
double unitarity_residual(const Eigen::Ref<const Eigen::MatrixXcd>& u);

// Coupled chain U_n = R_n (U_{n-1} (+) 1), U_1 = x_1, every U_n Haar on U(n).
class VirtualIsometryChain {
 public:
  VirtualIsometryChain(std::uint64_t seed, std::uint64_t replica_id);
  explicit VirtualIsometryChain(RngStream stream);

  std::uint64_t seed() const noexcept { return stream_.master_seed(); }
  std::uint64_t replica_id() const noexcept { return stream_.replica_id(); }
  Eigen::Index dim() const noexcept { return dim_; }

  // Grows one dimension at a time up to n. No-op when n <= dim().
  void grow_to(Eigen::Index n);
  void reserve(Eigen::Index capacity);

  Eigen::Block<const Eigen::MatrixXcd> matrix() const {
    return buffer_.topLeftCorner(dim_, dim_);
  }
  // Running product of the reflection determinants; equals det U_n.
  Complex determinant() const noexcept { return det_; }
  // Sphere point drawn at the most recent step.
  const Eigen::VectorXcd& last_target() const noexcept { return last_target_; }

 private:
  void step();

  RngStream stream_;
  Eigen::MatrixXcd buffer_;
  Eigen::Index dim_ = 0;
  Complex det_{1.0, 0.0};
  Eigen::VectorXcd last_target_;
};

struct ChainSnapshot {
  std::uint64_t replica_id = 0;
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  double unitarity_residual = 0.0;
  double det_phase = 0.0;  // arg det U_n in (-pi, pi]
  std::optional<Eigen::MatrixXcd> dense;
};

inline constexpr double kDriftTolerance = 1e-8;

// Grows through each requested dimension (strictly increasing, each larger than
// the current one) and hands a snapshot to `sink` at each. Dense copies of U_n
// are attached for n <= keep_dense_up_to. The sink sees the
// chain itself so it can compute spectra without copying the matrix.
// Throws NumericalDrift if the unitarity residual exceeds kDriftTolerance.
void grow_chain(VirtualIsometryChain& chain, std::span<const Eigen::Index> target_dims,
                Eigen::Index keep_dense_up_to,
                const std::function<void(const VirtualIsometryChain&, ChainSnapshot&&)>& sink);

}  // namespace xilimit
