#pragma once

#include <string>
#include <vector>

#include "analysis.hpp"
#include "ensemble.hpp"

namespace xilimit {

struct XiGridResult {
  std::vector<std::string> files;
  ScalingSummary convergence;  // median sup gap |xi_n - xi_N| per n < N
};

// Writes xi_grid/replica_R_nN.csv (direct values) for each requested n,
// xi_grid/replica_R_inf.csv (product on the largest dim, truncation from the
// manifest or n), convergence_summary.csv (per replica) and
// convergence_median.csv. An empty dims list means every dim of the run.
XiGridResult run_xi_grid(const EnsembleRun& run, const GridSpec& grid, std::vector<Eigen::Index> dims,
                         const std::string& out_dir);

struct StatsOptions {
  Eigen::Index n = 0;      // 0: largest dim
  double lambda = 1.0;     // mgf
  int alpha = 1;           // powersum (R index)
  long long window = 0;    // deviation / powersum K; 0: default
  int bins = 40;           // paircorr
};

// kind: variance | paircorr | deviation | coupling | mgf | args | powersum.
// Returns the CSV or JSON text; also writes stats/<kind>_n<N>.<ext> when the
// run has a directory.
std::string run_stats(const EnsembleRun& run, const std::string& kind, const StatsOptions& options);

}  // namespace xilimit
