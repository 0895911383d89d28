#include "taxtopics/tsframe.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace taxtopics {

void TsFrame::add(const std::string& name, Eigen::VectorXd values) {
  if (values.size() != n_rows())
    throw std::invalid_argument("tsframe: column '" + name +
                                "' length mismatch");
  if (name == "quarter" || name.empty())
    throw std::invalid_argument("tsframe: reserved column name");
  if (!cols_.count(name)) names_.push_back(name);
  cols_[name] = std::move(values);
}

const Eigen::VectorXd& TsFrame::col(const std::string& name) const {
  auto it = cols_.find(name);
  if (it == cols_.end())
    throw std::out_of_range("tsframe: no column '" + name + "'");
  return it->second;
}

Eigen::VectorXd& TsFrame::col(const std::string& name) {
  auto it = cols_.find(name);
  if (it == cols_.end())
    throw std::out_of_range("tsframe: no column '" + name + "'");
  return it->second;
}

Eigen::VectorXd TsFrame::shifted(const std::string& name, int lag) const {
  const Eigen::VectorXd& src = col(name);
  const int n = n_rows();
  Eigen::VectorXd out =
      Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
  for (int t = 0; t < n; ++t) {
    const int s = t - lag;
    if (s >= 0 && s < n) out(t) = src(s);
  }
  return out;
}

void TsFrame::set_integration(const std::string& name, int order) {
  if (order != 0 && order != 1)
    throw std::invalid_argument("tsframe: integration order must be 0 or 1");
  if (!cols_.count(name))
    throw std::out_of_range("tsframe: no column '" + name + "'");
  integration_[name] = order;
}

int TsFrame::integration(const std::string& name) const {
  auto it = integration_.find(name);
  if (it == integration_.end())
    throw std::runtime_error("tsframe: integration flag unset for '" + name +
                             "'");
  return it->second;
}

bool TsFrame::integration_known(const std::string& name) const {
  return integration_.count(name) > 0;
}

TsFrame TsFrame::merge(const TsFrame& a, const TsFrame& b) {
  std::unordered_map<int, int> b_pos;
  for (int t = 0; t < b.n_rows(); ++t)
    b_pos.emplace(b.quarters_[t].index(), t);

  std::vector<Quarter> common;
  std::vector<int> a_rows, b_rows;
  for (int t = 0; t < a.n_rows(); ++t) {
    auto it = b_pos.find(a.quarters_[t].index());
    if (it == b_pos.end()) continue;
    common.push_back(a.quarters_[t]);
    a_rows.push_back(t);
    b_rows.push_back(it->second);
  }

  TsFrame out(common);
  auto copy_cols = [&](const TsFrame& src, const std::vector<int>& rows) {
    for (const auto& name : src.names_) {
      Eigen::VectorXd v(out.n_rows());
      for (std::size_t i = 0; i < rows.size(); ++i)
        v(i) = src.cols_.at(name)(rows[i]);
      out.add(name, std::move(v));
      if (src.integration_.count(name))
        out.integration_[name] = src.integration_.at(name);
    }
  };
  copy_cols(a, a_rows);
  copy_cols(b, b_rows);
  return out;
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

TsFrame read_tsframe_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_commas(line);
  if (header.empty() || header[0] != "quarter")
    throw std::runtime_error(path + ": first column must be 'quarter'");

  std::vector<Quarter> quarters;
  std::vector<std::vector<double>> cols(header.size() - 1);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_commas(line);
    if (f.size() != header.size())
      throw std::runtime_error(path + ": ragged row '" + line + "'");
    quarters.push_back(parse_quarter(f[0]));
    for (std::size_t c = 1; c < f.size(); ++c) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (!f[c].empty()) {
        auto [p, ec] =
            std::from_chars(f[c].data(), f[c].data() + f[c].size(), v);
        if (ec != std::errc() || p != f[c].data() + f[c].size())
          throw std::runtime_error(path + ": bad number '" + f[c] + "'");
      }
      cols[c - 1].push_back(v);
    }
  }

  TsFrame frame(std::move(quarters));
  for (std::size_t c = 1; c < header.size(); ++c) {
    Eigen::VectorXd v(frame.n_rows());
    for (int t = 0; t < frame.n_rows(); ++t) v(t) = cols[c - 1][t];
    frame.add(header[c], std::move(v));
  }
  return frame;
}

void write_tsframe_csv(const TsFrame& frame, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "quarter";
  for (const auto& n : frame.names()) out << ',' << n;
  out << '\n';
  for (int t = 0; t < frame.n_rows(); ++t) {
    out << to_string(frame.quarters()[t]);
    for (const auto& n : frame.names()) {
      out << ',';
      const double v = frame.col(n)(t);
      if (!std::isnan(v)) out << fmt(v);
    }
    out << '\n';
  }
}

}  // namespace taxtopics
