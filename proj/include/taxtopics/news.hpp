#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "taxtopics/ols.hpp"
#include "taxtopics/tsframe.hpp"

namespace taxtopics {

struct NewsConfig {
  int h = 1;   // prediction horizon
  int p1 = 3;  // prevalence lags
  int p2 = 5;  // tax-change lags
  // true: regress the event-quarter residual on regressors dated t-j-h
  // (appendix form); false: lead the regressand by h and date regressors t-j
  bool appendix_indexing = true;
  bool intercept = true;
  int min_excess_rows = 5;  // masked rows must exceed regressors by this
};

struct NewsResult {
  Eigen::VectorXd news;  // over the frame index, NaN where lags are missing
  Eigen::VectorXd beta;  // est3 coefficients (full vector incl. controls)
  std::vector<std::string> names;
  int n_masked = 0;
  double r2 = 0.0;
};

// Fits the event-masked regression of the filtered news residual on lagged
// filtered prevalence plus lagged tax-change controls, then evaluates the
// prevalence part on every row with sufficient lags.
NewsResult build_news(const TsFrame& frame,
                      const std::vector<std::string>& prev_perp_cols,
                      const std::string& news_perp_col,
                      const std::vector<std::string>& dtax_cols,
                      const std::vector<bool>& mask, const NewsConfig& cfg);

void write_news_csv(const TsFrame& frame, const Eigen::VectorXd& news,
                    const std::string& path);

}  // namespace taxtopics
