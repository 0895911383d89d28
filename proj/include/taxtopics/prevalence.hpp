#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "taxtopics/corpus.hpp"
#include "taxtopics/quarter.hpp"

namespace taxtopics {

struct PrevalenceSeries {
  std::vector<Quarter> quarters;      // strictly increasing, gap-free range
  Eigen::MatrixXd values;             // quarters x topics, NaN when empty
  std::vector<int> doc_counts;

  int n_topics() const { return static_cast<int>(values.cols()); }
};

// per-quarter unweighted mean of document mixtures; quarters with no
// documents carry NaN values and a zero count
PrevalenceSeries prevalence(const Eigen::MatrixXd& theta,
                            const std::vector<Date>& doc_dates);

// MAP token labels argmax_k theta_dk phi_ki; ties pick the lowest topic,
// out-of-vocabulary tokens get -1
std::vector<int> map_token_labels(const Eigen::VectorXd& theta_d,
                                  const Eigen::MatrixXd& phi,
                                  const std::vector<std::string>& tokens,
                                  const Vocabulary& vocab);

// quarter,topic_0,...,topic_{K-1},n_docs with empty cells for missing
void write_prevalence_csv(const PrevalenceSeries& series,
                          const std::string& path);
PrevalenceSeries read_prevalence_csv(const std::string& path);

}  // namespace taxtopics
