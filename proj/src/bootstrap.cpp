#include "taxtopics/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "taxtopics/ols.hpp"
#include "taxtopics/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace taxtopics {

void BootstrapConfig::validate() const {
  if (block_length < 1)
    throw std::invalid_argument("bootstrap: block_length must be >= 1");
  if (n_replicates < 99)
    throw std::invalid_argument("bootstrap: need at least 99 replicates");
  if (h_max < 0) throw std::invalid_argument("bootstrap: bad h_max");
}

double quantile_type7(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double h = (v.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - lo) * (v[lo + 1] - v[lo]);
}

namespace {

struct TupleTable {
  std::vector<std::string> names;
  std::vector<int> integration;     // per column
  Eigen::MatrixXd tuples;           // M x n_cols: I(0) levels / I(1) diffs
  std::vector<Quarter> quarters;    // M entries for rebuilt frames
  TsFrame trimmed;                  // original usable sample (levels)
};

TupleTable prepare(const TsFrame& frame, const BootstrapConfig& cfg) {
  const auto& names = frame.names();
  for (const auto& n : names)
    if (!frame.integration_known(n))
      throw std::runtime_error("bootstrap: integration flag unset for '" + n +
                               "'");

  // usable range: all columns finite, no interior gaps
  int first = -1, last = -1;
  for (int t = 0; t < frame.n_rows(); ++t) {
    bool good = true;
    for (const auto& n : names)
      if (std::isnan(frame.col(n)(t))) {
        good = false;
        break;
      }
    if (good) {
      if (first < 0) first = t;
      last = t;
    }
  }
  if (first < 0) throw std::runtime_error("bootstrap: no complete rows");
  for (int t = first; t <= last; ++t)
    for (const auto& n : names)
      if (std::isnan(frame.col(n)(t)))
        throw std::runtime_error(
            "bootstrap: interior gap in column '" + n + "'");

  const int m = last - first + 1;
  if (m < cfg.block_length + 1)
    throw std::runtime_error("bootstrap: sample shorter than block length");

  TupleTable table;
  table.names = names;

  std::vector<Quarter> tq(frame.quarters().begin() + first,
                          frame.quarters().begin() + last + 1);
  table.trimmed = TsFrame(tq);
  for (const auto& n : names) {
    Eigen::VectorXd v = frame.col(n).segment(first, m);
    table.trimmed.add(n, v);
    table.trimmed.set_integration(n, frame.integration(n));
    table.integration.push_back(frame.integration(n));
  }

  // tuple rows t = 1..m-1 so levels align with differences
  table.tuples.resize(m - 1, names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    Eigen::VectorXd v = table.trimmed.col(names[c]);
    if (table.integration[c] == 1) {
      DetrendResult dt = detrend(v, 1);
      for (int t = 1; t < m; ++t)
        table.tuples(t - 1, c) = dt.residuals(t) - dt.residuals(t - 1);
    } else {
      for (int t = 1; t < m; ++t) table.tuples(t - 1, c) = v(t);
    }
  }
  table.quarters.assign(tq.begin() + 1, tq.end());
  return table;
}

TsFrame rebuild(const TupleTable& table, const Eigen::MatrixXd& sampled) {
  TsFrame out(table.quarters);
  const int m = static_cast<int>(sampled.rows());
  for (std::size_t c = 0; c < table.names.size(); ++c) {
    Eigen::VectorXd v(m);
    if (table.integration[c] == 1) {
      double acc = 0.0;
      for (int t = 0; t < m; ++t) {
        acc += sampled(t, c);
        v(t) = acc;
      }
    } else {
      v = sampled.col(c);
    }
    out.add(table.names[c], v);
    out.set_integration(table.names[c], table.integration[c]);
  }
  return out;
}

Eigen::MatrixXd resample_tuples(const TupleTable& table,
                                const BootstrapConfig& cfg, int replicate) {
  const int m = static_cast<int>(table.tuples.rows());
  const int block = std::min(cfg.block_length, m);
  const int n_starts = m - block + 1;
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(replicate)));

  Eigen::MatrixXd out(m, table.tuples.cols());
  int filled = 0;
  while (filled < m) {
    const int start = static_cast<int>(rng.uniform_int(n_starts));
    const int take = std::min(block, m - filled);
    out.middleRows(filled, take) = table.tuples.middleRows(start, take);
    filled += take;
  }
  return out;
}

}  // namespace

TsFrame mbb_resample(const TsFrame& frame, const BootstrapConfig& cfg,
                     int replicate) {
  TupleTable table = prepare(frame, cfg);
  return rebuild(table, resample_tuples(table, cfg, replicate));
}

IrfResult mbb_pipeline_ci(const TsFrame& frame, const PipelineFn& pipeline,
                          const BootstrapConfig& cfg) {
  cfg.validate();
  TupleTable table = prepare(frame, cfg);

  Eigen::VectorXd point = pipeline(table.trimmed);
  if (point.size() != cfg.h_max + 1)
    throw std::runtime_error("bootstrap: pipeline returned wrong length");

  const int b_count = cfg.n_replicates;
  Eigen::MatrixXd stats(b_count, cfg.h_max + 1);
  std::vector<char> failed(b_count, 0);

#pragma omp parallel for schedule(dynamic) num_threads(cfg.n_threads)
  for (int b = 0; b < b_count; ++b) {
    try {
      TsFrame rep = rebuild(table, resample_tuples(table, cfg, b));
      Eigen::VectorXd beta = pipeline(rep);
      if (beta.size() != cfg.h_max + 1)
        throw std::runtime_error("pipeline length changed");
      stats.row(b) = beta.transpose();
    } catch (const std::exception& e) {
      failed[b] = 1;
#pragma omp critical(bootstrap_log)
      std::cerr << "[bootstrap] replicate " << b << " failed: " << e.what()
                << "\n";
    }
  }

  int n_failed = 0;
  for (char f : failed) n_failed += f;
  if (n_failed > cfg.max_failure_rate * b_count)
    throw std::runtime_error("bootstrap: " + std::to_string(n_failed) + " of " +
                             std::to_string(b_count) + " replicates failed");

  IrfResult irf = IrfResult::empty(cfg.h_max);
  irf.beta = point;
  for (int h = 0; h <= cfg.h_max; ++h) {
    std::vector<double> centered;
    centered.reserve(b_count);
    double mean = 0.0;
    int n_ok = 0;
    for (int b = 0; b < b_count; ++b)
      if (!failed[b]) {
        mean += stats(b, h);
        ++n_ok;
      }
    mean /= n_ok;
    for (int b = 0; b < b_count; ++b)
      if (!failed[b]) centered.push_back(stats(b, h) - mean);

    const double q16 = quantile_type7(centered, 0.16);
    const double q84 = quantile_type7(centered, 0.84);
    const double q05 = quantile_type7(centered, 0.05);
    const double q95 = quantile_type7(centered, 0.95);
    irf.bands(h, 0) = point(h) - q84;  // lo68
    irf.bands(h, 1) = point(h) - q16;  // hi68
    irf.bands(h, 2) = point(h) - q95;  // lo90
    irf.bands(h, 3) = point(h) - q05;  // hi90
  }
  return irf;
}

}  // namespace taxtopics
