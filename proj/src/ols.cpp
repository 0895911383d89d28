#include "taxtopics/ols.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>

namespace taxtopics {

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& x,
           const std::vector<std::string>& names) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (y.size() != n) throw std::invalid_argument("ols: y/x row mismatch");
  if (n <= k)
    throw std::invalid_argument("ols: need more rows than regressors (" +
                                std::to_string(n) + " x " + std::to_string(k) +
                                ")");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) {
    std::string msg = "ols: rank-deficient design";
    if (!names.empty()) {
      msg += "; dependent columns:";
      const auto& perm = qr.colsPermutation().indices();
      for (Eigen::Index i = qr.rank(); i < k; ++i)
        msg += " " + names[perm(i)];
    }
    throw std::runtime_error(msg);
  }

  OlsFit fit;
  fit.beta = qr.solve(y);
  fit.fitted = x * fit.beta;
  fit.residuals = y - fit.fitted;
  fit.rss = fit.residuals.squaredNorm();
  fit.dof = static_cast<int>(n - k);
  fit.x = x;
  fit.names = names;

  // (X'X)^{-1} from the pivoted R factor
  Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k)
                          .triangularView<Eigen::Upper>();
  Eigen::MatrixXd rinv = r.inverse();
  Eigen::MatrixXd inv_permuted = rinv * rinv.transpose();
  const auto& perm = qr.colsPermutation();
  fit.xtx_inv = perm * inv_permuted * perm.transpose();
  return fit;
}

Eigen::MatrixXd hac_cov(const OlsFit& fit, int bandwidth) {
  if (bandwidth < 0) throw std::invalid_argument("hac_cov: bad bandwidth");
  const Eigen::Index n = fit.x.rows();
  const Eigen::Index k = fit.x.cols();

  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd xe = fit.x.row(t).transpose() * fit.residuals(t);
    meat += xe * xe.transpose();
  }
  for (int l = 1; l <= bandwidth; ++l) {
    const double w = 1.0 - double(l) / (bandwidth + 1);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index t = l; t < n; ++t) {
      gamma += (fit.x.row(t).transpose() * fit.residuals(t)) *
               (fit.x.row(t - l) * fit.residuals(t - l));
    }
    meat += w * (gamma + gamma.transpose());
  }
  Eigen::MatrixXd cov = fit.xtx_inv * meat * fit.xtx_inv;
  return 0.5 * (cov + cov.transpose());
}

Eigen::MatrixXd covariance(const OlsFit& fit, CovType type,
                           int hac_bandwidth) {
  switch (type) {
    case CovType::kClassical:
      return (fit.rss / fit.dof) * fit.xtx_inv;
    case CovType::kHC:
      return hac_cov(fit, 0);
    case CovType::kHAC: {
      int bw = hac_bandwidth >= 0
                   ? hac_bandwidth
                   : default_hac_bandwidth(static_cast<int>(fit.x.rows()));
      return hac_cov(fit, bw);
    }
  }
  throw std::logic_error("covariance: bad type");
}

int default_hac_bandwidth(int t_len) {
  return static_cast<int>(std::floor(1.3 * std::sqrt(double(t_len))));
}

Design build_design(const TsFrame& frame, const std::string& y_col, int y_lead,
                    const std::vector<RegressorSpec>& regressors,
                    int trend_order,
                    const std::vector<bool>* mask) {
  const int n = frame.n_rows();
  if (mask && static_cast<int>(mask->size()) != n)
    throw std::invalid_argument("build_design: mask length mismatch");

  Eigen::VectorXd y = frame.shifted(y_col, -y_lead);

  std::vector<std::pair<std::string, Eigen::VectorXd>> cols;
  if (trend_order >= 0)
    cols.emplace_back("const", Eigen::VectorXd::Ones(n));
  if (trend_order >= 1) {
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) t(i) = i;
    cols.emplace_back("trend", t);
    if (trend_order >= 2) cols.emplace_back("trend2", t.cwiseProduct(t));
  }
  for (const auto& spec : regressors) {
    if (spec.min_lag > spec.max_lag)
      throw std::invalid_argument("build_design: bad lag range for " +
                                  spec.column);
    for (int lag = spec.min_lag; lag <= spec.max_lag; ++lag) {
      std::string name = spec.column;
      if (lag > 0) name += "_lag" + std::to_string(lag);
      if (lag < 0) name += "_lead" + std::to_string(-lag);
      cols.emplace_back(std::move(name), frame.shifted(spec.column, lag));
    }
  }

  std::vector<int> rows;
  for (int t = 0; t < n; ++t) {
    if (mask && !(*mask)[t]) continue;
    if (std::isnan(y(t))) continue;
    bool good = true;
    for (const auto& [_, v] : cols)
      if (std::isnan(v(t))) {
        good = false;
        break;
      }
    if (good) rows.push_back(t);
  }

  Design d;
  d.rows = std::move(rows);
  d.y.resize(d.rows.size());
  d.x.resize(d.rows.size(), cols.size());
  d.names.reserve(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) d.names.push_back(cols[c].first);
  for (std::size_t i = 0; i < d.rows.size(); ++i) {
    d.y(i) = y(d.rows[i]);
    for (std::size_t c = 0; c < cols.size(); ++c)
      d.x(i, c) = cols[c].second(d.rows[i]);
  }
  return d;
}

Eigen::VectorXd project_out(const TsFrame& frame, const std::string& target,
                            const std::vector<std::string>& controls,
                            int p_lags, bool intercept,
                            const std::vector<bool>* mask) {
  if (p_lags < 1) throw std::invalid_argument("project_out: need p_lags >= 1");
  std::vector<RegressorSpec> regs;
  for (const auto& c : controls) regs.push_back({c, 1, p_lags});
  Design d = build_design(frame, target, 0, regs, intercept ? 0 : -1, mask);
  if (d.x.rows() <= d.x.cols())
    throw std::runtime_error(
        "project_out: masked sample smaller than regressor count");
  OlsFit fit = ols(d.y, d.x, d.names);

  Eigen::VectorXd out = Eigen::VectorXd::Constant(
      frame.n_rows(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < d.rows.size(); ++i)
    out(d.rows[i]) = fit.residuals(i);
  return out;
}

std::vector<bool> nonzero_mask(const TsFrame& frame, const std::string& col) {
  const Eigen::VectorXd& v = frame.col(col);
  std::vector<bool> mask(frame.n_rows());
  for (int t = 0; t < frame.n_rows(); ++t)
    mask[t] = !std::isnan(v(t)) && std::abs(v(t)) > 0.0;
  return mask;
}

namespace {

FTestResult exclusion_f(const Design& full, std::size_t n_keep_front) {
  // restricted design drops the trailing block, same rows
  OlsFit unres = ols(full.y, full.x, full.names);

  Eigen::MatrixXd xr = full.x.leftCols(n_keep_front);
  std::vector<std::string> rnames(full.names.begin(),
                                  full.names.begin() + n_keep_front);
  OlsFit res = ols(full.y, xr, rnames);

  FTestResult out;
  out.q = static_cast<int>(full.x.cols() - n_keep_front);
  out.dof = unres.dof;
  out.n_obs = static_cast<int>(full.x.rows());

  const double scale = res.rss > 0 ? res.rss : 1.0;
  if (unres.rss <= 1e-12 * scale) {
    out.infinite = true;
    out.f = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    out.partial_r2 = res.rss > 0 ? 1.0 : 0.0;
    return out;
  }
  out.f = ((res.rss - unres.rss) / out.q) / (unres.rss / out.dof);
  if (out.f < 0) out.f = 0;  // numeric fuzz on identical fits
  out.partial_r2 = res.rss > 0 ? (res.rss - unres.rss) / res.rss : 0.0;
  boost::math::fisher_f dist(out.q, out.dof);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.f));
  return out;
}

}  // namespace

FTestResult predictive_f(const TsFrame& frame, const std::string& dep,
                         const std::vector<std::string>& z_cols, int j,
                         const std::vector<std::string>& x_cols, int n_lags) {
  if (j < 0) throw std::invalid_argument("predictive_f: lead must be >= 0");
  // controls first so the z block can be dropped from the tail
  std::vector<RegressorSpec> regs;
  for (const auto& c : x_cols) regs.push_back({c, 1, n_lags});
  for (const auto& z : z_cols) regs.push_back({z, j, j});
  Design d = build_design(frame, dep, 0, regs, 0, nullptr);
  if (d.x.rows() <= d.x.cols())
    throw std::runtime_error("predictive_f: not enough observations");
  return exclusion_f(d, d.x.cols() - z_cols.size());
}

FTestResult granger_f(const TsFrame& frame,
                      const std::vector<std::string>& cause_cols,
                      const std::string& effect, int p_lags) {
  if (p_lags < 1) throw std::invalid_argument("granger_f: lag order must be >= 1");
  std::vector<RegressorSpec> regs;
  regs.push_back({effect, 1, p_lags});
  for (const auto& c : cause_cols) regs.push_back({c, 1, p_lags});
  Design d = build_design(frame, effect, 0, regs, 0, nullptr);
  if (d.x.rows() <= d.x.cols())
    throw std::runtime_error("granger_f: not enough observations");
  return exclusion_f(d, d.x.cols() - cause_cols.size() * p_lags);
}

DetrendResult detrend(const Eigen::VectorXd& series, int order) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("detrend: order must be 0, 1 or 2");
  const Eigen::Index n = series.size();
  std::vector<int> rows;
  for (Eigen::Index t = 0; t < n; ++t)
    if (!std::isnan(series(t))) rows.push_back(static_cast<int>(t));
  const int k = order + 1;
  if (static_cast<int>(rows.size()) <= k)
    throw std::runtime_error("detrend: not enough observations");

  Eigen::MatrixXd x(rows.size(), k);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    y(i) = series(rows[i]);
    x(i, 0) = 1.0;
    if (order >= 1) x(i, 1) = rows[i];
    if (order >= 2) x(i, 2) = double(rows[i]) * rows[i];
  }
  OlsFit fit = ols(y, x);

  DetrendResult out;
  out.coef = fit.beta;
  out.residuals =
      Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < rows.size(); ++i)
    out.residuals(rows[i]) = fit.residuals(i);
  return out;
}

}  // namespace taxtopics
