#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "taxtopics/corpus.hpp"
#include "taxtopics/rng.hpp"

namespace taxtopics {
namespace synthlab {

struct PlantedTruth {
  Eigen::MatrixXd phi;    // K x V
  Eigen::MatrixXd theta;  // D x K
  std::vector<double> alpha;
  Eigen::MatrixXd eta;  // K x V prior used to draw phi
  std::vector<std::vector<int>> assignments;  // per doc, in draw order
  std::uint64_t seed = 0;
};

struct LdaCorpusSpec {
  int n_topics = 0;
  int n_terms = 0;
  int n_docs = 0;
  int doc_len = 0;
  std::vector<double> alpha;           // size K
  Eigen::MatrixXd eta;                 // K x V
  std::uint64_t seed = 1;
  int docs_per_quarter = 4;            // dates start at 1950Q1
};

// exact ancestral sampling of the LDA generative process
std::pair<BowCorpus, PlantedTruth> generate_lda_corpus(const LdaCorpusSpec& s);

// convenience: symmetric eta
Eigen::MatrixXd symmetric_eta(int n_topics, int n_terms, double value);

// Exact collapsed posterior over all K^N assignment vectors of a tiny
// corpus. Token order matches expand_tokens(); assignment vectors index the
// table in mixed-radix order with the first token as the most significant
// digit.
struct PosteriorEnumeration {
  std::vector<double> prob;
  std::size_t n_tokens = 0;
  int n_topics = 0;
  double log_evidence = 0.0;

  std::size_t encode(const std::vector<int>& z) const;
};

PosteriorEnumeration enumerate_posterior(const BowCorpus& corpus, int n_topics,
                                         const std::vector<double>& alpha,
                                         const Eigen::MatrixXd& eta);

// log p(W, Z | alpha, eta) for one assignment vector, same collapsed joint
// the enumeration integrates
double assignment_log_joint(const BowCorpus& corpus, int n_topics,
                            const std::vector<double>& alpha,
                            const Eigen::MatrixXd& eta,
                            const std::vector<int>& z);

// VAR(p) simulation: y_t = sum_j A_j y_{t-j} + chol(Sigma) eps_t
Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& coef,
                             const Eigen::MatrixXd& innovation_cov, int t_len,
                             int burn, std::uint64_t seed);

// horizon path of sum_j A_j-recursion applied to an impact vector
Eigen::MatrixXd var_irf_analytic(const std::vector<Eigen::MatrixXd>& coef,
                                 const Eigen::VectorXd& impact, int horizon);

}  // namespace synthlab
}  // namespace taxtopics
