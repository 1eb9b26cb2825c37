#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace xilimit {

struct GridSpec {
  // re_lo, re_hi, im_lo, im_hi
  std::array<double, 4> box{-2.0, 2.0, -2.0, 2.0};
  int steps = 21;
};

struct ExperimentManifest {
  std::uint64_t seed = 0;
  std::uint64_t replicas = 1;
  std::vector<Eigen::Index> dims;
  // Product truncation A and point window K; 0 means "use n".
  long long truncation = 0;
  long long window = 0;
  GridSpec grid;
  std::string out;
  bool keep_dense = false;
  std::vector<std::string> suites;
};

// Throws Manifest on violated invariants.
void validate(const ExperimentManifest& m);

std::string manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const std::string& text);

// FNV-1a over the canonical JSON without the output directory, as 16 hex digits.
std::string manifest_hash(const ExperimentManifest& m);

}  // namespace xilimit
