#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "taxtopics/lp.hpp"
#include "taxtopics/tsframe.hpp"

namespace taxtopics {

struct VarFit {
  std::vector<std::string> columns;
  std::vector<Eigen::MatrixXd> coef;  // A_1..A_p, each n x n
  Eigen::MatrixXd intercept_terms;    // n x (trend_order+1), row per equation
  Eigen::MatrixXd innovation_cov;
  std::vector<double> stability_moduli;  // companion eigenvalue magnitudes
  int n_obs = 0;
  int trend_order = 0;
};

// equation-by-equation least squares with p lags of every column plus trend
// terms
VarFit fit_var(const TsFrame& frame, const std::vector<std::string>& columns,
               int p_lags, int trend_order = 0);

// orthogonalized responses from the lower-triangular factor of the
// innovation covariance; horizon 0 equals the factor column
IrfResult var_choleski_irf(const VarFit& fit, int shock_pos, int h_max,
                           int response_pos = -1);

}  // namespace taxtopics
