#include "taxtopics/synthlab.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "taxtopics/lda.hpp"
#include "taxtopics/special.hpp"

namespace taxtopics {
namespace synthlab {

Eigen::MatrixXd symmetric_eta(int n_topics, int n_terms, double value) {
  return Eigen::MatrixXd::Constant(n_topics, n_terms, value);
}

std::pair<BowCorpus, PlantedTruth> generate_lda_corpus(const LdaCorpusSpec& s) {
  if (s.n_topics < 1 || s.n_terms < 2 || s.n_docs < 1 || s.doc_len < 1)
    throw std::invalid_argument("generate_lda_corpus: bad dimensions");
  if (static_cast<int>(s.alpha.size()) != s.n_topics ||
      s.eta.rows() != s.n_topics || s.eta.cols() != s.n_terms)
    throw std::invalid_argument("generate_lda_corpus: parameter shapes");

  Rng rng(s.seed);
  PlantedTruth truth;
  truth.seed = s.seed;
  truth.alpha = s.alpha;
  truth.eta = s.eta;
  truth.phi.resize(s.n_topics, s.n_terms);
  for (int k = 0; k < s.n_topics; ++k) {
    std::vector<double> row(s.n_terms);
    for (int i = 0; i < s.n_terms; ++i) row[i] = s.eta(k, i);
    auto draw = rng.dirichlet(row);
    for (int i = 0; i < s.n_terms; ++i) truth.phi(k, i) = draw[i];
  }

  BowCorpus corpus;
  corpus.vocab.terms.reserve(s.n_terms);
  for (int i = 0; i < s.n_terms; ++i) {
    std::string t = "term" + std::to_string(i);
    corpus.vocab.index.emplace(t, static_cast<std::uint32_t>(i));
    corpus.vocab.terms.push_back(std::move(t));
    corpus.vocab.doc_freq.push_back(0);
  }

  truth.theta.resize(s.n_docs, s.n_topics);
  truth.assignments.resize(s.n_docs);

  std::vector<std::vector<double>> phi_rows(s.n_topics,
                                            std::vector<double>(s.n_terms));
  for (int k = 0; k < s.n_topics; ++k)
    for (int i = 0; i < s.n_terms; ++i) phi_rows[k][i] = truth.phi(k, i);

  for (int d = 0; d < s.n_docs; ++d) {
    auto theta = rng.dirichlet(s.alpha);
    for (int k = 0; k < s.n_topics; ++k) truth.theta(d, k) = theta[k];

    BowDocument doc;
    doc.id = "doc" + std::to_string(d);
    int qidx = 1950 * 4 + d / std::max(1, s.docs_per_quarter);
    Quarter q = Quarter::from_index(qidx);
    doc.date = Date{q.year, (q.q - 1) * 3 + 1, 1};

    truth.assignments[d].reserve(s.doc_len);
    for (int n = 0; n < s.doc_len; ++n) {
      int k = static_cast<int>(rng.categorical(theta));
      truth.assignments[d].push_back(k);
      int w = static_cast<int>(rng.categorical(phi_rows[k]));
      ++doc.counts[static_cast<std::uint32_t>(w)];
      ++doc.n_tokens;
    }
    corpus.docs.push_back(std::move(doc));
  }

  // fill doc frequencies so the vocabulary is self-consistent
  for (const auto& d : corpus.docs)
    for (const auto& [term, _] : d.counts) ++corpus.vocab.doc_freq[term];

  return {std::move(corpus), std::move(truth)};
}

double assignment_log_joint(const BowCorpus& corpus, int n_topics,
                            const std::vector<double>& alpha,
                            const Eigen::MatrixXd& eta,
                            const std::vector<int>& z) {
  const int v_count = static_cast<int>(corpus.vocab.size());
  const int d_count = static_cast<int>(corpus.docs.size());
  Eigen::MatrixXd n_dk = Eigen::MatrixXd::Zero(d_count, n_topics);
  Eigen::MatrixXd n_ki = Eigen::MatrixXd::Zero(n_topics, v_count);
  Eigen::VectorXd n_k = Eigen::VectorXd::Zero(n_topics);

  std::size_t t = 0;
  for (int d = 0; d < d_count; ++d) {
    for (auto term : expand_tokens(corpus.docs[d])) {
      const int k = z.at(t++);
      n_dk(d, k) += 1;
      n_ki(k, term) += 1;
      n_k(k) += 1;
    }
  }
  if (t != z.size())
    throw std::invalid_argument("assignment_log_joint: length mismatch");

  double a = 0.0;
  for (double v : alpha) a += v;
  double ll = 0.0;
  for (int d = 0; d < d_count; ++d) {
    const double nd = corpus.docs[d].n_tokens;
    ll += std::lgamma(a) - std::lgamma(nd + a);
    for (int k = 0; k < n_topics; ++k)
      if (n_dk(d, k) > 0)
        ll += std::lgamma(n_dk(d, k) + alpha[k]) - std::lgamma(alpha[k]);
  }
  for (int k = 0; k < n_topics; ++k) {
    const double es = eta.row(k).sum();
    ll += std::lgamma(es) - std::lgamma(n_k(k) + es);
    for (int i = 0; i < v_count; ++i)
      if (n_ki(k, i) > 0)
        ll += std::lgamma(n_ki(k, i) + eta(k, i)) - std::lgamma(eta(k, i));
  }
  return ll;
}

std::size_t PosteriorEnumeration::encode(const std::vector<int>& z) const {
  std::size_t idx = 0;
  for (int v : z) idx = idx * n_topics + static_cast<std::size_t>(v);
  return idx;
}

PosteriorEnumeration enumerate_posterior(const BowCorpus& corpus, int n_topics,
                                         const std::vector<double>& alpha,
                                         const Eigen::MatrixXd& eta) {
  std::size_t n_tokens = 0;
  for (const auto& d : corpus.docs) n_tokens += d.n_tokens;

  double states_d = std::pow(double(n_topics), double(n_tokens));
  if (states_d > 1e6)
    throw std::invalid_argument("enumerate_posterior: state space too large");
  const std::size_t n_states = static_cast<std::size_t>(states_d + 0.5);

  PosteriorEnumeration out;
  out.n_tokens = n_tokens;
  out.n_topics = n_topics;
  out.prob.resize(n_states);

  std::vector<double> logp(n_states);
  std::vector<int> z(n_tokens, 0);
  for (std::size_t idx = 0; idx < n_states; ++idx) {
    // decode idx, first token most significant
    std::size_t rem = idx;
    for (std::size_t t = n_tokens; t-- > 0;) {
      z[t] = static_cast<int>(rem % n_topics);
      rem /= n_topics;
    }
    logp[idx] = assignment_log_joint(corpus, n_topics, alpha, eta, z);
  }
  out.log_evidence = logsumexp(logp);
  for (std::size_t idx = 0; idx < n_states; ++idx)
    out.prob[idx] = std::exp(logp[idx] - out.log_evidence);
  return out;
}

Eigen::MatrixXd simulate_var(const std::vector<Eigen::MatrixXd>& coef,
                             const Eigen::MatrixXd& innovation_cov, int t_len,
                             int burn, std::uint64_t seed) {
  if (coef.empty()) throw std::invalid_argument("simulate_var: no lags");
  const int n = static_cast<int>(coef[0].rows());
  const int p = static_cast<int>(coef.size());
  Eigen::LLT<Eigen::MatrixXd> llt(innovation_cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("simulate_var: covariance not PD");
  Eigen::MatrixXd chol = llt.matrixL();

  Rng rng(seed);
  const int total = t_len + burn;
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(total, n);
  Eigen::VectorXd eps(n);
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < n; ++i) eps(i) = rng.normal();
    Eigen::VectorXd v = chol * eps;
    for (int j = 1; j <= p && t - j >= 0; ++j)
      v += coef[j - 1] * y.row(t - j).transpose();
    y.row(t) = v.transpose();
  }
  return y.bottomRows(t_len);
}

Eigen::MatrixXd var_irf_analytic(const std::vector<Eigen::MatrixXd>& coef,
                                 const Eigen::VectorXd& impact, int horizon) {
  const int n = static_cast<int>(impact.size());
  const int p = static_cast<int>(coef.size());
  Eigen::MatrixXd path(horizon + 1, n);
  std::vector<Eigen::VectorXd> psi;
  psi.push_back(impact);
  path.row(0) = impact.transpose();
  for (int h = 1; h <= horizon; ++h) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int j = 1; j <= p && h - j >= 0; ++j) v += coef[j - 1] * psi[h - j];
    psi.push_back(v);
    path.row(h) = v.transpose();
  }
  return path;
}

}  // namespace synthlab
}  // namespace taxtopics
