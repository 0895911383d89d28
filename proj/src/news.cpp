#include "taxtopics/news.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace taxtopics {

NewsResult build_news(const TsFrame& frame,
                      const std::vector<std::string>& prev_perp_cols,
                      const std::string& news_perp_col,
                      const std::vector<std::string>& dtax_cols,
                      const std::vector<bool>& mask, const NewsConfig& cfg) {
  if (cfg.h < 0) throw std::invalid_argument("build_news: h must be >= 0");
  const int n = frame.n_rows();
  if (static_cast<int>(mask.size()) != n)
    throw std::invalid_argument("build_news: mask length mismatch");

  // appendix form dates regressors at t-j-h with the regressand (and mask)
  // at the event quarter t; est3 form leads the regressand by h instead
  const int lag_shift = cfg.appendix_indexing ? cfg.h : 0;
  const int y_lead = cfg.appendix_indexing ? 0 : cfg.h;

  std::vector<RegressorSpec> regs;
  for (const auto& c : prev_perp_cols)
    regs.push_back({c, lag_shift, lag_shift + cfg.p1});
  for (const auto& c : dtax_cols)
    regs.push_back({c, lag_shift, lag_shift + cfg.p2});

  std::vector<bool> fit_mask = mask;
  if (!cfg.appendix_indexing) {
    // event mask applies at t+h, expressed on the regression row t
    std::vector<bool> shifted(n, false);
    for (int t = 0; t + cfg.h < n; ++t) shifted[t] = mask[t + cfg.h];
    fit_mask = std::move(shifted);
  }

  Design d = build_design(frame, news_perp_col, y_lead, regs,
                          cfg.intercept ? 0 : -1, &fit_mask);
  if (static_cast<int>(d.rows.size()) <
      static_cast<int>(d.x.cols()) + cfg.min_excess_rows)
    throw std::runtime_error(
        "build_news: masked sample too small (" +
        std::to_string(d.rows.size()) + " rows for " +
        std::to_string(d.x.cols()) + " regressors)");

  OlsFit fit = ols(d.y, d.x, d.names);

  NewsResult out;
  out.beta = fit.beta;
  out.names = d.names;
  out.n_masked = static_cast<int>(d.rows.size());
  const double tss = (d.y.array() - d.y.mean()).square().sum();
  out.r2 = tss > 0 ? 1.0 - fit.rss / tss : 0.0;

  // news = prevalence block evaluated on all rows with sufficient lags
  const int n_prev_terms =
      static_cast<int>(prev_perp_cols.size()) * (cfg.p1 + 1);
  const int prev_offset = cfg.intercept ? 1 : 0;

  out.news =
      Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<Eigen::VectorXd> prev_shifted;
  for (const auto& c : prev_perp_cols)
    for (int j = 0; j <= cfg.p1; ++j)
      prev_shifted.push_back(frame.shifted(c, lag_shift + j));

  for (int t = 0; t < n; ++t) {
    double acc = 0.0;
    bool good = true;
    for (int p = 0; p < n_prev_terms; ++p) {
      const double v = prev_shifted[p](t);
      if (std::isnan(v)) {
        good = false;
        break;
      }
      acc += fit.beta(prev_offset + p) * v;
    }
    if (good) out.news(t) = acc;
  }
  return out;
}

void write_news_csv(const TsFrame& frame, const Eigen::VectorXd& news,
                    const std::string& path) {
  if (news.size() != frame.n_rows())
    throw std::invalid_argument("write_news_csv: length mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "quarter,news_h\n";
  for (int t = 0; t < frame.n_rows(); ++t) {
    out << to_string(frame.quarters()[t]) << ',';
    if (!std::isnan(news(t))) {
      char buf[32];
      auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), news(t));
      out.write(buf, p - buf);
    }
    out << '\n';
  }
}

}  // namespace taxtopics
