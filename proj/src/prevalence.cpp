#include "taxtopics/prevalence.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace taxtopics {

PrevalenceSeries prevalence(const Eigen::MatrixXd& theta,
                            const std::vector<Date>& doc_dates) {
  if (static_cast<std::size_t>(theta.rows()) != doc_dates.size())
    throw std::invalid_argument("prevalence: theta/dates length mismatch");
  if (theta.rows() == 0) throw std::invalid_argument("prevalence: no documents");

  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  std::vector<int> qidx(doc_dates.size());
  for (std::size_t d = 0; d < doc_dates.size(); ++d) {
    qidx[d] = assign_quarter(doc_dates[d]).index();
    lo = std::min(lo, qidx[d]);
    hi = std::max(hi, qidx[d]);
  }

  const int n_q = hi - lo + 1;
  const int k_count = static_cast<int>(theta.cols());
  PrevalenceSeries out;
  out.values = Eigen::MatrixXd::Zero(n_q, k_count);
  out.doc_counts.assign(n_q, 0);
  out.quarters.reserve(n_q);
  for (int q = 0; q < n_q; ++q) out.quarters.push_back(Quarter::from_index(lo + q));

  for (std::size_t d = 0; d < doc_dates.size(); ++d) {
    const int q = qidx[d] - lo;
    out.values.row(q) += theta.row(d);
    ++out.doc_counts[q];
  }
  for (int q = 0; q < n_q; ++q) {
    if (out.doc_counts[q] > 0)
      out.values.row(q) /= out.doc_counts[q];
    else
      out.values.row(q).setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  return out;
}

std::vector<int> map_token_labels(const Eigen::VectorXd& theta_d,
                                  const Eigen::MatrixXd& phi,
                                  const std::vector<std::string>& tokens,
                                  const Vocabulary& vocab) {
  const int k_count = static_cast<int>(phi.rows());
  std::vector<int> labels;
  labels.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto id = vocab.lookup(t);
    if (!id) {
      labels.push_back(-1);
      continue;
    }
    int best = 0;
    double best_p = theta_d(0) * phi(0, *id);
    for (int k = 1; k < k_count; ++k) {
      const double p = theta_d(k) * phi(k, *id);
      if (p > best_p) {
        best_p = p;
        best = k;
      }
    }
    labels.push_back(best);
  }
  return labels;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

void write_prevalence_csv(const PrevalenceSeries& series,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "quarter";
  for (int k = 0; k < series.n_topics(); ++k) out << ",topic_" << k;
  out << ",n_docs\n";
  for (std::size_t q = 0; q < series.quarters.size(); ++q) {
    out << to_string(series.quarters[q]);
    for (int k = 0; k < series.n_topics(); ++k) {
      out << ',';
      if (series.doc_counts[q] > 0) out << fmt(series.values(q, k));
    }
    out << ',' << series.doc_counts[q] << '\n';
  }
}

PrevalenceSeries read_prevalence_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty prevalence file: " + path);

  std::vector<std::string> header;
  {
    std::size_t start = 0;
    for (;;) {
      auto pos = line.find(',', start);
      header.push_back(line.substr(start, pos == std::string::npos
                                              ? std::string::npos
                                              : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  if (header.size() < 3 || header.front() != "quarter" ||
      header.back() != "n_docs")
    throw std::runtime_error("bad prevalence header in " + path);
  const int k_count = static_cast<int>(header.size()) - 2;

  std::vector<Quarter> quarters;
  std::vector<std::vector<double>> rows;
  std::vector<int> counts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      auto pos = line.find(',', start);
      f.push_back(line.substr(start, pos == std::string::npos
                                         ? std::string::npos
                                         : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (f.size() != header.size())
      throw std::runtime_error("ragged prevalence row: " + line);
    quarters.push_back(parse_quarter(f[0]));
    std::vector<double> vals(k_count);
    for (int k = 0; k < k_count; ++k) {
      if (f[k + 1].empty()) {
        vals[k] = std::numeric_limits<double>::quiet_NaN();
      } else {
        auto [p, ec] = std::from_chars(
            f[k + 1].data(), f[k + 1].data() + f[k + 1].size(), vals[k]);
        if (ec != std::errc())
          throw std::runtime_error("bad number in " + path + ": " + f[k + 1]);
      }
    }
    rows.push_back(std::move(vals));
    int c = 0;
    auto [p, ec] = std::from_chars(f.back().data(),
                                   f.back().data() + f.back().size(), c);
    if (ec != std::errc())
      throw std::runtime_error("bad n_docs in " + path + ": " + f.back());
    counts.push_back(c);
  }

  PrevalenceSeries out;
  out.quarters = std::move(quarters);
  out.doc_counts = std::move(counts);
  out.values.resize(rows.size(), k_count);
  for (std::size_t q = 0; q < rows.size(); ++q)
    for (int k = 0; k < k_count; ++k) out.values(q, k) = rows[q][k];
  return out;
}

}  // namespace taxtopics
