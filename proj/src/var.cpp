#include "taxtopics/var.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "taxtopics/ols.hpp"
#include "taxtopics/synthlab.hpp"

namespace taxtopics {

VarFit fit_var(const TsFrame& frame, const std::vector<std::string>& columns,
               int p_lags, int trend_order) {
  if (p_lags < 1) throw std::invalid_argument("fit_var: lag order must be >= 1");
  if (columns.empty()) throw std::invalid_argument("fit_var: no columns");
  const int n_vars = static_cast<int>(columns.size());

  std::vector<RegressorSpec> regs;
  for (const auto& c : columns) regs.push_back({c, 1, p_lags});

  VarFit fit;
  fit.columns = columns;
  fit.trend_order = trend_order;
  fit.coef.assign(p_lags, Eigen::MatrixXd::Zero(n_vars, n_vars));
  const int n_det = trend_order + 1;
  fit.intercept_terms.resize(n_vars, n_det);

  Eigen::MatrixXd resid;
  for (int eq = 0; eq < n_vars; ++eq) {
    Design d = build_design(frame, columns[eq], 0, regs, trend_order, nullptr);
    OlsFit f = ols(d.y, d.x, d.names);
    if (eq == 0) {
      fit.n_obs = static_cast<int>(d.rows.size());
      resid.resize(fit.n_obs, n_vars);
    } else if (static_cast<int>(d.rows.size()) != fit.n_obs) {
      throw std::runtime_error("fit_var: equations on unequal samples");
    }
    resid.col(eq) = f.residuals;
    fit.intercept_terms.row(eq) = f.beta.head(n_det).transpose();
    // lag coefficients are grouped per variable: var j lags 1..p
    for (int j = 0; j < n_vars; ++j)
      for (int l = 0; l < p_lags; ++l)
        fit.coef[l](eq, j) = f.beta(n_det + j * p_lags + l);
  }

  const int k = n_det + n_vars * p_lags;
  fit.innovation_cov = resid.transpose() * resid / double(fit.n_obs - k);

  // companion-form eigenvalues
  Eigen::MatrixXd comp =
      Eigen::MatrixXd::Zero(n_vars * p_lags, n_vars * p_lags);
  for (int l = 0; l < p_lags; ++l)
    comp.block(0, l * n_vars, n_vars, n_vars) = fit.coef[l];
  if (p_lags > 1)
    comp.block(n_vars, 0, n_vars * (p_lags - 1), n_vars * (p_lags - 1))
        .setIdentity();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    fit.stability_moduli.push_back(std::abs(es.eigenvalues()(i)));
  return fit;
}

IrfResult var_choleski_irf(const VarFit& fit, int shock_pos, int h_max,
                           int response_pos) {
  const int n_vars = static_cast<int>(fit.columns.size());
  if (shock_pos < 0 || shock_pos >= n_vars)
    throw std::invalid_argument("var_choleski_irf: bad shock position");
  if (response_pos < 0) response_pos = shock_pos;

  Eigen::LLT<Eigen::MatrixXd> llt(fit.innovation_cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "var_choleski_irf: innovation covariance not positive definite");
  Eigen::MatrixXd chol = llt.matrixL();

  Eigen::MatrixXd path =
      synthlab::var_irf_analytic(fit.coef, chol.col(shock_pos), h_max);

  IrfResult irf = IrfResult::empty(h_max);
  irf.beta = path.col(response_pos);
  irf.n_obs.assign(h_max + 1, fit.n_obs);
  return irf;
}

}  // namespace taxtopics
