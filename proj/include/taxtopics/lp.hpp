#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "taxtopics/ols.hpp"
#include "taxtopics/tsframe.hpp"

namespace taxtopics {

// horizon-indexed responses; band columns are lo68, hi68, lo90, hi90 and
// stay NaN until a bootstrap fills them
struct IrfResult {
  Eigen::VectorXd beta;
  Eigen::MatrixXd bands;
  std::vector<int> n_obs;
  Eigen::VectorXd se;  // HAC, NaN unless requested

  static IrfResult empty(int h_max);
};

void write_irf_csv(const IrfResult& irf, const std::string& path);

std::string lead_col_name(const std::string& col, int h);
// materializes <col>__lead<h> columns so a resampler can keep (y_{t+H}, x_t)
// tuples glued together
void add_lead_columns(TsFrame& frame, const std::string& col, int h_max);

struct LpConfig {
  int h_max = 20;
  int trend_order = 2;  // intercept + linear + quadratic
  std::vector<RegressorSpec> controls;
  // regress on pre-materialized lead columns instead of shifting y; the
  // bootstrap path requires this
  bool use_lead_columns = false;
  bool hac_se = false;
  int hac_bandwidth = -1;  // -1 = default truncation
};

// one regression per horizon: y_{t+H} on the shock column(s), trend terms
// and controls; returns one beta matrix column per shock
struct LpResult {
  Eigen::MatrixXd beta;  // (h_max+1) x n_shocks
  Eigen::MatrixXd se;
  std::vector<int> n_obs;

  IrfResult irf(int shock = 0) const;
};

LpResult local_projection(const TsFrame& frame, const std::string& y_col,
                          const std::vector<std::string>& shock_cols,
                          const LpConfig& cfg);

struct LpIvConfig {
  int h_max = 20;
  int trend_order = 2;
  std::vector<RegressorSpec> controls;
  std::vector<RegressorSpec> instruments;
  int endog_lead = 1;  // instrumented variable led one quarter
  bool use_lead_columns = false;
  int hac_bandwidth = -1;
  double weak_f_threshold = 10.0;
};

struct LpIvResult {
  IrfResult irf;
  double first_stage_f = 0.0;
  bool weak_instruments = false;
};

// per-horizon 2SLS with the instruments excluded from the structural
// equation; HAC standard errors on the second stage
LpIvResult lp_iv(const TsFrame& frame, const std::string& y_col,
                 const std::string& endog_col, const LpIvConfig& cfg);

// rescales every result so reference's trough equals `target`
void normalize_irfs(std::vector<IrfResult*> results, const IrfResult& reference,
                    double target = -1.0);

}  // namespace taxtopics
