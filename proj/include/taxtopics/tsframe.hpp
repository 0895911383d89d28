#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "taxtopics/quarter.hpp"

namespace taxtopics {

// Named numeric columns on a common quarterly index. NaN marks missing
// observations; lags and leads run off the ends into NaN.
class TsFrame {
 public:
  TsFrame() = default;
  explicit TsFrame(std::vector<Quarter> quarters)
      : quarters_(std::move(quarters)) {}

  int n_rows() const { return static_cast<int>(quarters_.size()); }
  const std::vector<Quarter>& quarters() const { return quarters_; }
  const std::vector<std::string>& names() const { return names_; }
  bool has(const std::string& name) const { return cols_.count(name) > 0; }

  void add(const std::string& name, Eigen::VectorXd values);
  const Eigen::VectorXd& col(const std::string& name) const;
  Eigen::VectorXd& col(const std::string& name);

  // lag > 0 shifts back in time, lag < 0 is a lead
  Eigen::VectorXd shifted(const std::string& name, int lag) const;

  void set_integration(const std::string& name, int order);  // 0 or 1
  int integration(const std::string& name) const;            // throws if unset
  bool integration_known(const std::string& name) const;

  // inner join on quarter
  static TsFrame merge(const TsFrame& a, const TsFrame& b);

 private:
  std::vector<Quarter> quarters_;
  std::vector<std::string> names_;
  std::map<std::string, Eigen::VectorXd> cols_;
  std::map<std::string, int> integration_;
};

// header starts with `quarter`, remaining columns numeric, empty = missing
TsFrame read_tsframe_csv(const std::string& path);
void write_tsframe_csv(const TsFrame& frame, const std::string& path);

}  // namespace taxtopics
