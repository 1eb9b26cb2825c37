#include "error.hpp"

namespace xilimit {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateTarget: return "DegenerateTarget";
    case ErrorCode::NumericalDrift: return "NumericalDriftFailure";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::NearUnityEigenvalue: return "NearUnityEigenvalue";
    case ErrorCode::NearDegenerate: return "NearDegenerate";
    case ErrorCode::OnBranchCut: return "OnBranchCut";
    case ErrorCode::FormulaInconsistency: return "FormulaInconsistency";
    case ErrorCode::InvalidPoints: return "InvalidPoints";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InsufficientReplicas: return "InsufficientReplicas";
    case ErrorCode::NotCoupled: return "NotCoupled";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::IncompleteRun: return "IncompleteRun";
    case ErrorCode::Manifest: return "ManifestError";
  }
  return "Unknown";
}

}  // namespace xilimit
