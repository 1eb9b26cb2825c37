#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ensemble.hpp"

namespace xilimit {

struct CheckResult {
  std::string name;
  bool hard = true;  // exact identities are hard, statistical checks soft
  bool passed = false;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::size_t count = 0;
  std::optional<std::string> error;
};

struct VerifyReport {
  std::string suite;
  std::string manifest_hash;
  std::vector<CheckResult> checks;

  bool hard_ok() const;
};

// suite: "identities", "statistics" or "all".
VerifyReport run_verify(const EnsembleRun& run, const std::string& suite);

std::string report_to_json(const VerifyReport& report);

}  // namespace xilimit
