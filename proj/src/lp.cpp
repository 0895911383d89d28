#include "taxtopics/lp.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>

namespace taxtopics {

IrfResult IrfResult::empty(int h_max) {
  IrfResult r;
  r.beta = Eigen::VectorXd::Constant(h_max + 1,
                                     std::numeric_limits<double>::quiet_NaN());
  r.bands = Eigen::MatrixXd::Constant(h_max + 1, 4,
                                      std::numeric_limits<double>::quiet_NaN());
  r.se = Eigen::VectorXd::Constant(h_max + 1,
                                   std::numeric_limits<double>::quiet_NaN());
  r.n_obs.assign(h_max + 1, 0);
  return r;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

void write_irf_csv(const IrfResult& irf, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "horizon,beta,lo68,hi68,lo90,hi90,n_obs\n";
  for (Eigen::Index h = 0; h < irf.beta.size(); ++h) {
    out << h << ',' << fmt(irf.beta(h));
    for (int c = 0; c < 4; ++c) out << ',' << fmt(irf.bands(h, c));
    out << ',' << irf.n_obs[h] << '\n';
  }
}

std::string lead_col_name(const std::string& col, int h) {
  return col + "__lead" + std::to_string(h);
}

void add_lead_columns(TsFrame& frame, const std::string& col, int h_max) {
  for (int h = 1; h <= h_max; ++h)
    frame.add(lead_col_name(col, h), frame.shifted(col, -h));
}

IrfResult LpResult::irf(int shock) const {
  IrfResult r = IrfResult::empty(static_cast<int>(beta.rows()) - 1);
  r.beta = beta.col(shock);
  r.se = se.col(shock);
  r.n_obs = n_obs;
  return r;
}

LpResult local_projection(const TsFrame& frame, const std::string& y_col,
                          const std::vector<std::string>& shock_cols,
                          const LpConfig& cfg) {
  if (shock_cols.empty())
    throw std::invalid_argument("local_projection: no shock columns");
  const int n_shocks = static_cast<int>(shock_cols.size());

  LpResult out;
  out.beta.resize(cfg.h_max + 1, n_shocks);
  out.se = Eigen::MatrixXd::Constant(cfg.h_max + 1, n_shocks,
                                     std::numeric_limits<double>::quiet_NaN());
  out.n_obs.assign(cfg.h_max + 1, 0);

  // shocks first so their coefficients sit after the trend block
  std::vector<RegressorSpec> regs;
  for (const auto& s : shock_cols) regs.push_back({s, 0, 0});
  for (const auto& c : cfg.controls) regs.push_back(c);

  const int trend_cols = cfg.trend_order + 1;
  for (int h = 0; h <= cfg.h_max; ++h) {
    std::string y = y_col;
    int lead = h;
    if (cfg.use_lead_columns && h > 0) {
      y = lead_col_name(y_col, h);
      lead = 0;
    }
    Design d = build_design(frame, y, lead, regs, cfg.trend_order, nullptr);
    OlsFit fit = ols(d.y, d.x, d.names);
    for (int s = 0; s < n_shocks; ++s)
      out.beta(h, s) = fit.beta(trend_cols + s);
    out.n_obs[h] = static_cast<int>(d.rows.size());
    if (cfg.hac_se) {
      Eigen::MatrixXd cov = covariance(fit, CovType::kHAC, cfg.hac_bandwidth);
      for (int s = 0; s < n_shocks; ++s)
        out.se(h, s) = std::sqrt(cov(trend_cols + s, trend_cols + s));
    }
  }
  return out;
}

LpIvResult lp_iv(const TsFrame& frame, const std::string& y_col,
                 const std::string& endog_col, const LpIvConfig& cfg) {
  if (cfg.instruments.empty())
    throw std::invalid_argument("lp_iv: need at least one instrument");

  LpIvResult out;
  out.irf = IrfResult::empty(cfg.h_max);

  const int trend_cols = cfg.trend_order + 1;

  for (int h = 0; h <= cfg.h_max; ++h) {
    std::string y = y_col;
    int lead = h;
    if (cfg.use_lead_columns && h > 0) {
      y = lead_col_name(y_col, h);
      lead = 0;
    }

    // one design holding everything keeps the rows aligned:
    //   [trend | endog_led | controls | instruments]
    std::vector<RegressorSpec> regs;
    regs.push_back({endog_col, -cfg.endog_lead, -cfg.endog_lead});
    for (const auto& c : cfg.controls) regs.push_back(c);
    int n_ctrl_cols = 0;
    for (const auto& c : cfg.controls) n_ctrl_cols += c.max_lag - c.min_lag + 1;
    for (const auto& z : cfg.instruments) regs.push_back(z);

    Design d = build_design(frame, y, lead, regs, cfg.trend_order, nullptr);
    const int k_all = static_cast<int>(d.x.cols());
    const int n = static_cast<int>(d.x.rows());
    const int n_endog = 1;
    const int k_exog = trend_cols + n_ctrl_cols;  // trend + controls
    const int k_inst = k_all - k_exog - n_endog;
    if (k_inst < 1) throw std::runtime_error("lp_iv: no instrument columns");
    if (n <= k_exog + n_endog)
      throw std::runtime_error("lp_iv: not enough observations");

    // column order in d.x: trend block, endog, controls, instruments
    Eigen::MatrixXd x_struct(n, k_exog + n_endog);
    x_struct.leftCols(trend_cols) = d.x.leftCols(trend_cols);
    x_struct.col(trend_cols) = d.x.col(trend_cols);  // endog
    x_struct.rightCols(n_ctrl_cols) =
        d.x.middleCols(trend_cols + 1, n_ctrl_cols);

    Eigen::MatrixXd z_full(n, k_exog + k_inst);
    z_full.leftCols(trend_cols) = d.x.leftCols(trend_cols);
    z_full.middleCols(trend_cols, n_ctrl_cols) =
        d.x.middleCols(trend_cols + 1, n_ctrl_cols);
    z_full.rightCols(k_inst) = d.x.rightCols(k_inst);

    // first stage (horizon 0 diagnostics only)
    if (h == 0) {
      Eigen::VectorXd endog = d.x.col(trend_cols);
      OlsFit fs = ols(endog, z_full);
      Eigen::MatrixXd z_res = z_full.leftCols(k_exog);
      OlsFit fs_r = ols(endog, z_res);
      const double q = k_inst;
      if (fs.rss <= 1e-12 * std::max(1.0, fs_r.rss)) {
        out.first_stage_f = std::numeric_limits<double>::infinity();
      } else {
        out.first_stage_f = ((fs_r.rss - fs.rss) / q) / (fs.rss / fs.dof);
      }
      out.weak_instruments = out.first_stage_f < cfg.weak_f_threshold;
      if (out.weak_instruments)
        std::fprintf(stderr,
                     "[lp_iv] weak instruments: first-stage F %.3f below "
                     "%.1f\n",
                     out.first_stage_f, cfg.weak_f_threshold);
    }

    // 2SLS via regressors projected onto the instrument span
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> zqr(z_full);
    zqr.setThreshold(1e-10);
    if (zqr.rank() < z_full.cols())
      throw std::runtime_error("lp_iv: first-stage rank failure");
    Eigen::MatrixXd thin_q =
        zqr.householderQ() * Eigen::MatrixXd::Identity(n, z_full.cols());
    Eigen::MatrixXd x_hat = thin_q * (thin_q.transpose() * x_struct);

    Eigen::LDLT<Eigen::MatrixXd> xhx(x_hat.transpose() * x_hat);
    if (xhx.info() != Eigen::Success)
      throw std::runtime_error("lp_iv: projected design rank failure");
    Eigen::VectorXd beta = xhx.solve(x_hat.transpose() * d.y);

    // HAC sandwich with structural residuals and projected regressors
    Eigen::VectorXd resid = d.y - x_struct * beta;
    OlsFit pseudo;
    pseudo.x = x_hat;
    pseudo.residuals = resid;
    Eigen::MatrixXd xtx_inv = xhx.solve(
        Eigen::MatrixXd::Identity(x_hat.cols(), x_hat.cols()));
    pseudo.xtx_inv = xtx_inv;
    const int bw = cfg.hac_bandwidth >= 0 ? cfg.hac_bandwidth
                                          : default_hac_bandwidth(n);
    Eigen::MatrixXd cov = hac_cov(pseudo, bw);

    out.irf.beta(h) = beta(trend_cols);
    out.irf.se(h) = std::sqrt(cov(trend_cols, trend_cols));
    out.irf.n_obs[h] = n;
  }
  return out;
}

void normalize_irfs(std::vector<IrfResult*> results, const IrfResult& reference,
                    double target) {
  double trough = reference.beta.minCoeff();
  if (trough == 0.0)
    throw std::runtime_error("normalize_irfs: reference trough is zero");
  const double factor = target / trough;
  for (IrfResult* r : results) {
    r->beta *= factor;
    r->se *= std::abs(factor);
    r->bands *= factor;
    if (factor < 0) {
      // flip band ordering so lower <= upper still holds
      for (Eigen::Index h = 0; h < r->bands.rows(); ++h) {
        std::swap(r->bands(h, 0), r->bands(h, 1));
        std::swap(r->bands(h, 2), r->bands(h, 3));
      }
    }
  }
}

}  // namespace taxtopics
