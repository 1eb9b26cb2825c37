#include "isometry.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace xilimit {

Complex Reflection::determinant() const {
  // kappa = 1 - conj(x_n) and 1 - x_n = conj(kappa).
  return -std::conj(kappa) / kappa;
}

Eigen::MatrixXcd Reflection::dense() const {
  const Eigen::Index n = dim();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n, n);
  r.noalias() -= (w / kappa) * w.adjoint();
  return r;
}

Reflection reflection_from_target(const UnitVector& x) {
  const Eigen::Index n = x.dim();
  Reflection r;
  r.w = x.entries();
  r.w[n - 1] -= 1.0;
  r.kappa = 1.0 - std::conj(x[n - 1]);
  if (std::abs(r.kappa) < 1e-12)
    fail(ErrorCode::DegenerateTarget, "sphere target coincides with the last basis vector");
  return r;
}

void apply_reflection_inplace(const Reflection& r, Eigen::Ref<Eigen::MatrixXcd> m) {
  if (m.rows() != r.dim())
    fail(ErrorCode::InvalidArgument, "reflection of dim " + std::to_string(r.dim()) +
                                         " applied to matrix with " +
                                         std::to_string(m.rows()) + " rows");
  const Eigen::RowVectorXcd row = r.w.adjoint() * m;
  m.noalias() -= (r.w / r.kappa) * row;
}

Eigen::MatrixXcd apply_reflection(const Reflection& r, const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd out = m;
  apply_reflection_inplace(r, out);
  return out;
}

double unitarity_residual(const Eigen::Ref<const Eigen::MatrixXcd>& u) {
  Eigen::MatrixXcd g = u.adjoint() * u;
  g.diagonal().array() -= 1.0;
  return g.cwiseAbs().maxCoeff();
}

VirtualIsometryChain::VirtualIsometryChain(std::uint64_t seed, std::uint64_t replica_id)
    : VirtualIsometryChain(derive_stream(seed, replica_id, tags::kChain)) {}

VirtualIsometryChain::VirtualIsometryChain(RngStream stream) : stream_(std::move(stream)) {}

void VirtualIsometryChain::reserve(Eigen::Index capacity) {
  if (capacity <= buffer_.rows()) return;
  Eigen::MatrixXcd grown = Eigen::MatrixXcd::Zero(capacity, capacity);
  grown.topLeftCorner(dim_, dim_) = buffer_.topLeftCorner(dim_, dim_);
  buffer_.swap(grown);
}

void VirtualIsometryChain::grow_to(Eigen::Index n) {
  if (n <= dim_) return;
  if (n > buffer_.rows()) reserve(std::max(n, 2 * buffer_.rows()));
  while (dim_ < n) step();
}

void VirtualIsometryChain::step() {
  const Eigen::Index n = dim_ + 1;
  UnitVector x = sample_unit_sphere(stream_, n);
  std::optional<Reflection> r;
  try {
    r = reflection_from_target(x);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateTarget) throw;
    x = sample_unit_sphere(stream_, n);
    r = reflection_from_target(x);
  }
  // Embed U_{n-1} as U_{n-1} (+) 1. Row and column n-1 are still zero.
  buffer_(n - 1, n - 1) = 1.0;
  apply_reflection_inplace(*r, buffer_.topLeftCorner(n, n));
  det_ *= r->determinant();
  det_ /= std::abs(det_);
  last_target_ = x.entries();
  dim_ = n;
}

void grow_chain(VirtualIsometryChain& chain, std::span<const Eigen::Index> target_dims,
                Eigen::Index keep_dense_up_to,
                const std::function<void(const VirtualIsometryChain&, ChainSnapshot&&)>& sink) {
  Eigen::Index previous = chain.dim();
  for (Eigen::Index n : target_dims) {
    if (n <= previous)
      fail(ErrorCode::InvalidArgument, "target dims must be strictly increasing and exceed the current dim");
    previous = n;
  }
  if (!target_dims.empty()) chain.reserve(target_dims.back());

  for (Eigen::Index n : target_dims) {
    chain.grow_to(n);
    ChainSnapshot snap;
    snap.replica_id = chain.replica_id();
    snap.seed = chain.seed();
    snap.n = n;
    snap.unitarity_residual = unitarity_residual(chain.matrix());
    snap.det_phase = std::arg(chain.determinant());
    if (snap.unitarity_residual > kDriftTolerance)
      fail(ErrorCode::NumericalDrift,
           "replica " + std::to_string(chain.replica_id()) + ": unitarity residual " +
               std::to_string(snap.unitarity_residual) + " at n=" + std::to_string(n));
    if (n <= keep_dense_up_to) snap.dense = Eigen::MatrixXcd(chain.matrix());
    if (sink) sink(chain, std::move(snap));
  }
}

}  // namespace xilimit
