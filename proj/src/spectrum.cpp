#include "spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "error.hpp"
#include "isometry.hpp"

namespace xilimit {

namespace {

using Complex = std::complex<double>;

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

double wrap_2pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

std::string describe(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

struct CayleyPass {
  std::vector<double> theta;  // angles of U in [0, 2 pi), unsorted
  double pole_distance = 0.0;
  double det_mismatch = 0.0;
  bool ok = true;
};

// Eigenangles of U via V = e^{i beta} U, whose eigenvalue -1 is the pole.
CayleyPass cayley_pass(const Eigen::Ref<const Eigen::MatrixXcd>& u, double beta) {
  const Eigen::Index n = u.rows();
  const Complex rot = std::polar(1.0, beta);
  Eigen::MatrixXcd p = rot * u;
  p.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(p);
  // K = i (I - V)(I + V)^{-1} = i (2 (I + V)^{-1} - I)
  Eigen::MatrixXcd k = Complex(0.0, 2.0) * lu.inverse();
  k.diagonal().array() -= Complex(0.0, 1.0);
  Eigen::MatrixXcd h = 0.5 * (k + k.adjoint());
  CayleyPass out;
  if (!h.allFinite()) {
    out.ok = false;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::SolverFailure, "Hermitian eigensolver did not converge");

  out.theta.resize(static_cast<std::size_t>(n));
  double max_abs = 0.0;
  double log_mod = 0.0;
  double phase = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = 2.0 * std::atan(solver.eigenvalues()[i]);  // angle of V in (-pi, pi)
    max_abs = std::max(max_abs, std::abs(t));
    log_mod += std::log(2.0 * std::cos(0.5 * t));
    phase += 0.5 * t;
    out.theta[static_cast<std::size_t>(i)] = wrap_2pi(t - beta);
  }
  out.pole_distance = M_PI - max_abs;

  // det(I + V) from the LU factors must match prod (1 + e^{i t_k}).
  const auto& f = lu.matrixLU();
  double lu_log_mod = 0.0;
  double lu_phase = lu.permutationP().determinant() < 0 ? M_PI : 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    lu_log_mod += std::log(std::abs(f(i, i)));
    lu_phase += std::arg(f(i, i));
  }
  const double dphase = std::remainder(lu_phase - phase, kTwoPi);
  out.det_mismatch = std::max(std::abs(lu_log_mod - log_mod), std::abs(dphase));
  return out;
}

std::vector<double> general_angles(const Eigen::Ref<const Eigen::MatrixXcd>& u) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::SolverFailure, "complex eigensolver did not converge");
  std::vector<double> theta;
  theta.reserve(static_cast<std::size_t>(u.rows()));
  for (const Complex& lambda : solver.eigenvalues()) {
    const double dev = std::abs(std::abs(lambda) - 1.0);
    if (dev > 1e-6) fail(ErrorCode::SolverFailure, "eigenvalue modulus off the unit circle by " + describe(dev));
    theta.push_back(wrap_2pi(std::arg(lambda)));
  }
  return theta;
}

std::vector<double> cayley_angles(const Eigen::Ref<const Eigen::MatrixXcd>& u) {
  constexpr double kMinPoleDistance = 1e-3;
  CayleyPass pass = cayley_pass(u, 0.0);
  // I + U singular to working precision: eigenvalue at -1, rotate once first.
  for (double beta : {0.7390851332151607, 2.0943951023931957}) {
    if (pass.ok) break;
    pass = cayley_pass(u, beta);
  }
  if (!pass.ok) fail(ErrorCode::SolverFailure, "Cayley transform singular under every trial rotation");
  if (!(pass.pole_distance >= kMinPoleDistance)) {
    std::vector<double> sorted = pass.theta;
    std::sort(sorted.begin(), sorted.end());
    double widest = sorted.front() + kTwoPi - sorted.back();
    double middle = sorted.back() + 0.5 * widest;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const double gap = sorted[i] - sorted[i - 1];
      if (gap > widest) {
        widest = gap;
        middle = sorted[i - 1] + 0.5 * gap;
      }
    }
    // Rotate so that the middle of the widest gap maps to -1.
    pass = cayley_pass(u, M_PI - middle);
  }
  if (!(pass.det_mismatch <= 1e-6))
    fail(ErrorCode::SolverFailure, "Cayley eigenangles inconsistent with det(I+V): mismatch " +
                                       describe(pass.det_mismatch));
  return std::move(pass.theta);
}

}  // namespace

Spectrum Spectrum::from_angles(std::vector<double> theta, std::optional<Provenance> provenance) {
  if (theta.empty()) fail(ErrorCode::InvalidArgument, "spectrum must have at least one angle");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] > 0.0 && theta[i] < kTwoPi))
      fail(ErrorCode::InvalidArgument, "eigenangle outside (0, 2 pi)");
    if (i > 0 && !(theta[i] > theta[i - 1]))
      fail(ErrorCode::InvalidArgument, "eigenangles must be strictly increasing");
  }
  Spectrum s;
  s.gap_to_one_ = std::min(theta.front(), kTwoPi - theta.back());
  double spacing = theta.front() + kTwoPi - theta.back();
  for (std::size_t i = 1; i < theta.size(); ++i) spacing = std::min(spacing, theta[i] - theta[i - 1]);
  s.min_spacing_ = spacing;
  s.theta_ = std::move(theta);
  s.provenance_ = provenance;
  return s;
}

double Spectrum::periodized_angle(long long k) const {
  const long long n = static_cast<long long>(theta_.size());
  const long long q = floor_div(k - 1, n);
  const long long r = (k - 1) - q * n;
  return theta_[static_cast<std::size_t>(r)] + kTwoPi * static_cast<double>(q);
}

Spectrum Spectrum::conjugated() const {
  std::vector<double> t(theta_.rbegin(), theta_.rend());
  for (double& v : t) v = kTwoPi - v;
  return from_angles(std::move(t), provenance_);
}

Spectrum eigenangles(const Eigen::Ref<const Eigen::MatrixXcd>& u, EigenOptions options,
                     std::optional<Provenance> provenance) {
  if (u.rows() != u.cols() || u.rows() == 0) fail(ErrorCode::InvalidArgument, "eigenangles needs a square non-empty matrix");
  if (options.check_unitarity) {
    const double res = unitarity_residual(u);
    if (res > 1e-8) fail(ErrorCode::InvalidArgument, "matrix is not unitary: residual " + describe(res));
  }
  std::vector<double> theta =
      options.method == EigenMethod::General ? general_angles(u) : cayley_angles(u);
  std::sort(theta.begin(), theta.end());

  const double gap_to_one = std::min(theta.front(), kTwoPi - theta.back());
  if (gap_to_one < kTieTolerance)
    fail(ErrorCode::NearUnityEigenvalue, "eigenvalue within " + describe(gap_to_one) + " of 1");
  if (theta.size() > 1) {
    double spacing = theta.front() + kTwoPi - theta.back();
    for (std::size_t i = 1; i < theta.size(); ++i) spacing = std::min(spacing, theta[i] - theta[i - 1]);
    if (spacing < kTieTolerance)
      fail(ErrorCode::NearDegenerate,
           "eigenangles tie: smallest spacing " + describe(spacing) + " is below the tie tolerance");
  }
  return Spectrum::from_angles(std::move(theta), provenance);
}

RescaledPointSet RescaledPointSet::from_spectrum(const Spectrum& spec, long long window) {
  if (window < 1) fail(ErrorCode::InvalidArgument, "window K must be >= 1");
  RescaledPointSet p;
  p.n_ = spec.size();
  p.window_ = window;
  auto base = std::make_shared<std::vector<double>>();
  base->reserve(static_cast<std::size_t>(p.n_));
  const double scale = static_cast<double>(p.n_) / kTwoPi;
  for (double t : spec.angles()) base->push_back(scale * t);
  p.base_ = std::move(base);
  p.spectrum_ = std::make_shared<const Spectrum>(spec);
  p.provenance_ = spec.provenance();
  return p;
}

RescaledPointSet RescaledPointSet::from_values(std::vector<double> values) {
  if (values.size() < 3 || values.size() % 2 == 0)
    fail(ErrorCode::InvalidArgument, "explicit points need 2K+1 values, K >= 1");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) fail(ErrorCode::InvalidPoints, "explicit points must be strictly increasing");
  RescaledPointSet p;
  p.window_ = static_cast<long long>(values.size() / 2);
  p.base_ = std::make_shared<const std::vector<double>>(std::move(values));
  return p;
}

double RescaledPointSet::operator()(long long k) const {
  if (n_ > 0) {
    // y_{r + q n} = y_r + q n, an integer shift of a table entry.
    const long long n = n_;
    const long long q = floor_div(k - 1, n);
    const long long r = (k - 1) - q * n;
    return (*base_)[static_cast<std::size_t>(r)] + static_cast<double>(q * n);
  }
  if (k < -window_ || k > window_) fail(ErrorCode::WindowTooSmall, "index outside explicit point window");
  return (*base_)[static_cast<std::size_t>(k + window_)];
}

const Spectrum& RescaledPointSet::spectrum() const {
  if (!spectrum_) fail(ErrorCode::InvalidArgument, "explicit point set has no spectrum");
  return *spectrum_;
}

RescaledPointSet rescaled_points(const Spectrum& spec, long long window) {
  return RescaledPointSet::from_spectrum(spec, window);
}

}  // namespace xilimit
