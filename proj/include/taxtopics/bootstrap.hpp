#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "taxtopics/lp.hpp"
#include "taxtopics/tsframe.hpp"

namespace taxtopics {

struct BootstrapConfig {
  int n_replicates = 1999;
  int block_length = 12;
  std::uint64_t seed = 1;
  int h_max = 20;
  double max_failure_rate = 0.01;
  int n_threads = 1;  // replicates use derived seeds, so parallel == serial

  void validate() const;
};

// Runs the closure on the original frame for the point estimate, then on
// n_replicates moving-block resamples: I(1) columns are linearly detrended
// and first-differenced, the joint tuples (including materialized y leads)
// are block-resampled, differences are re-accumulated, and the closure
// rebuilds everything downstream. Intervals are
//   [beta_hat - q*_{1-a/2}, beta_hat - q*_{a/2}]
// with quantiles of beta* centered at the replicate mean; bands at 68% and
// 90%.
//
// The closure must be pure given its frame and use the materialized
// <y>__lead<h> columns for horizon regressands. Every frame column needs an
// integration flag; the usable sample must be gap-free.
using PipelineFn = std::function<Eigen::VectorXd(const TsFrame&)>;

IrfResult mbb_pipeline_ci(const TsFrame& frame, const PipelineFn& pipeline,
                          const BootstrapConfig& cfg);

// type-7 quantile (linear interpolation), data need not be sorted
double quantile_type7(std::vector<double> v, double p);

// exposed for tests: one resampled frame, deterministic in (cfg.seed,
// replicate)
TsFrame mbb_resample(const TsFrame& frame, const BootstrapConfig& cfg,
                     int replicate);

}  // namespace taxtopics
