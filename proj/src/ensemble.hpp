#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isometry.hpp"
#include "manifest.hpp"
#include "spectrum.hpp"

namespace xilimit {

struct ReplicaRecord {
  std::uint64_t replica_id = 0;
  std::vector<Spectrum> spectra;          // aligned with manifest dims
  std::vector<ChainSnapshot> snapshots;   // aligned with manifest dims
};

struct EnsembleRun {
  ExperimentManifest manifest;
  std::string hash;
  std::vector<ReplicaRecord> replicas;
  double wall_seconds = 0.0;
  std::string directory;  // empty for in-memory runs

  // Position of n in the manifest dims; throws IncompleteRun if absent.
  std::size_t dim_index(Eigen::Index n) const;
  const Spectrum& spectrum(std::size_t replica_pos, Eigen::Index n) const;
  std::vector<Spectrum> spectra_at(Eigen::Index n) const;
  Eigen::Index max_dim() const { return manifest.dims.back(); }
};

// Grows replicas [first_replica, first_replica + manifest.replicas) in memory.
// Dense matrices are kept for n <= 64, or for every n with keep_dense.
EnsembleRun grow_ensemble(const ExperimentManifest& manifest, std::uint64_t first_replica = 0);

// Grows and persists under manifest.out:
//   manifest.json, index.json, spectra/replica_NNNNNN.csv,
//   snapshots/replica_NNNNNN.json, dense/replica_NNNNNN_nNNNNN.bin
EnsembleRun run_grow(const ExperimentManifest& manifest);

// Reads a persisted run, checking the manifest hash of every file.
EnsembleRun load_run(const std::string& directory);

// First line of every CSV artifact.
std::string hash_comment(const std::string& hash);

}  // namespace xilimit
