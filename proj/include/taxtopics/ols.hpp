#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "taxtopics/tsframe.hpp"

namespace taxtopics {

struct OlsFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd xtx_inv;
  Eigen::MatrixXd x;  // design actually used
  double rss = 0.0;
  int dof = 0;        // rows - cols
  std::vector<std::string> names;
};

// least squares via rank-revealing QR; rank deficiency throws, naming the
// dependent columns when names are given
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
           const std::vector<std::string>& names = {});

enum class CovType { kClassical, kHC, kHAC };

// Newey-West sandwich with Bartlett weights; bandwidth 0 reduces to HC
Eigen::MatrixXd hac_cov(const OlsFit& fit, int bandwidth);
Eigen::MatrixXd covariance(const OlsFit& fit, CovType type,
                           int hac_bandwidth = -1);

// default lag truncation floor(1.3 sqrt(T))
int default_hac_bandwidth(int t_len);

// regression term: column expanded into lags min_lag..max_lag (negative
// values are leads)
struct RegressorSpec {
  std::string column;
  int min_lag = 0;
  int max_lag = 0;
};

struct Design {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  std::vector<int> rows;  // frame rows kept after complete-case filtering
  std::vector<std::string> names;
};

// Assembles y (optionally led) against trend terms and expanded regressors,
// keeping complete-case rows (and only rows passing `mask` when given).
// trend_order: -1 none, 0 intercept, 1 +linear, 2 +quadratic; trends use the
// frame row index.
Design build_design(const TsFrame& frame, const std::string& y_col, int y_lead,
                    const std::vector<RegressorSpec>& regressors,
                    int trend_order,
                    const std::vector<bool>* mask = nullptr);

// residuals of `target` on lags 1..p of each control column, complete-case
// within `mask` when given; NaN outside the estimation rows
Eigen::VectorXd project_out(const TsFrame& frame, const std::string& target,
                            const std::vector<std::string>& controls,
                            int p_lags, bool intercept = true,
                            const std::vector<bool>* mask = nullptr);

// exact-nonzero rows of a column, the event mask used by est2/est3
std::vector<bool> nonzero_mask(const TsFrame& frame, const std::string& col);

struct FTestResult {
  double f = 0.0;
  double p_value = 1.0;
  double partial_r2 = 0.0;
  int q = 0;    // restrictions
  int dof = 0;  // unrestricted residual dof
  bool infinite = false;  // perfect unrestricted fit
  int n_obs = 0;
};

// exclusion F-test of the block `z_cols` at lead j in
//   dep_t = g0 + g1' z_{t-j} + sum_{i=1..n_lags} b_i' x_{t-i} + u_t
FTestResult predictive_f(const TsFrame& frame, const std::string& dep,
                         const std::vector<std::string>& z_cols, int j,
                         const std::vector<std::string>& x_cols,
                         int n_lags = 12);

// standard single-equation Granger exclusion test with p lags of cause and
// effect
FTestResult granger_f(const TsFrame& frame,
                      const std::vector<std::string>& cause_cols,
                      const std::string& effect, int p_lags);

struct DetrendResult {
  Eigen::VectorXd residuals;  // NaN where input was NaN
  Eigen::VectorXd coef;       // trend coefficients
};

// order 0 demeans, 1 removes a linear trend, 2 quadratic
DetrendResult detrend(const Eigen::VectorXd& series, int order);

}  // namespace taxtopics
