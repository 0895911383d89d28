#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taxtopics/corpus.hpp"
#include "taxtopics/rng.hpp"

namespace taxtopics {

struct LdaConfig {
  int n_topics = 25;
  int total_iters = 15000;
  int burn_in = 10000;
  double gamma_shape = 0.01;   // c
  double gamma_scale = 100.0;  // s
  double fixed_point_tol = 0.01;
  std::uint64_t rng_seed = 1;
  bool optimize_alpha = true;
  bool optimize_eta = true;  // ignored when a fixed eta prior is supplied
  int thin = 1;              // post-burn-in snapshot cadence
  int trace_every = 0;       // emit log-joint every n sweeps (0 = off)
  int n_threads = 1;         // > 1 switches to the approximate parallel sweep

  void validate() const;
};

// Collapsed sampler state: token-level assignments plus the three count
// tables. n_dk row sums equal document lengths and n_ki row sums equal n_k
// at all times.
struct GibbsState {
  // flattened token stream, documents in corpus order, within a document
  // terms in ascending id order repeated by count
  std::vector<std::uint32_t> token_term;
  std::vector<std::uint32_t> token_doc;
  std::vector<std::uint32_t> doc_offset;  // doc d spans [offset[d], offset[d+1])
  std::vector<std::int32_t> z;

  Eigen::MatrixXi n_dk;  // D x K
  Eigen::MatrixXi n_ki;  // K x V
  Eigen::VectorXi n_k;   // K

  std::vector<double> alpha;    // K
  Eigen::MatrixXd eta;          // K x V
  Eigen::VectorXd eta_row_sum;  // K
  bool eta_symmetric = true;    // step 1: single scalar replicated

  int n_docs() const { return static_cast<int>(doc_offset.size()) - 1; }
  int n_topics() const { return static_cast<int>(n_dk.cols()); }
  int n_terms() const { return static_cast<int>(n_ki.cols()); }
  double eta_scalar() const { return eta(0, 0); }

  void set_symmetric_eta(double value);
  // rebuilds the three tables from z; used by consistency checks
  bool counts_consistent() const;
};

// token expansion shared with the enumeration oracle so assignment vectors
// line up index-by-index
std::vector<std::uint32_t> expand_tokens(const BowDocument& doc);

GibbsState init_state(const BowCorpus& corpus, int n_topics, Rng& rng);

// collapsed conditional for one token of term `term` in document `d` whose
// current assignment has already been removed from the counts:
//   w_k = (n_dk + alpha_k) (n_ki + eta_ki) / (n_k + sum_i eta_ki)
void conditional_topic_weights(const GibbsState& state, int d,
                               std::uint32_t term,
                               std::vector<double>& weights);

// resamples every token once in fixed (d, n) order
void gibbs_sweep(GibbsState& state, Rng& rng);

// approximate sweep: documents are partitioned across threads which sample
// against sweep-start topic-term counts and reconcile at the end; not
// covered by the determinism guarantees of the sequential sweep
void gibbs_sweep_parallel(GibbsState& state, std::uint64_t seed, int sweep_id,
                          int n_threads);

struct FixedPointResult {
  bool updated = false;     // false when the degenerate-update guard fired
  int iterations = 0;
};

// MAP fixed point for alpha under the Gamma(c, s) hyperprior:
//   alpha_k <- (alpha_k sum_d [Psi(n_dk+alpha_k)-Psi(alpha_k)] + c - 1)
//              / (sum_d [Psi(N_d+a)-Psi(a)] + 1/s)
// Nonpositive numerator or denominator leaves alpha unchanged and warns.
FixedPointResult optimize_alpha(GibbsState& state, double c, double s,
                                double tol);

// symmetric-eta analog with K*V-summed terms (step 1 only)
FixedPointResult optimize_eta_symmetric(GibbsState& state, double c, double s,
                                        double tol);

// theta_dk = (n_dk + alpha_k) / (N_d + sum alpha)
Eigen::MatrixXd estimate_theta(const GibbsState& state);
// phi_ki = (n_ki + eta_ki) / (n_k + sum_i eta_ki)
Eigen::MatrixXd estimate_phi(const GibbsState& state);

// log p(W, Z | alpha, eta) with Theta and Phi integrated out
double collapsed_log_joint(const GibbsState& state);

struct TopicModel {
  Eigen::MatrixXd phi;    // K x V
  Eigen::MatrixXd theta;  // D x K
  std::vector<double> alpha;
  Eigen::MatrixXd eta;
  LdaConfig config;
  int first_averaged_iter = 0;
  int last_averaged_iter = 0;
};

// Runs the chain and averages post-burn-in snapshots. A supplied prior
// matrix fixes eta (step 2); otherwise eta starts symmetric at 1 and is
// re-estimated each sweep.
TopicModel run_chain(const BowCorpus& corpus, const LdaConfig& config,
                     const std::optional<Eigen::MatrixXd>& eta_prior = {});

void save_checkpoint(const TopicModel& model, const std::string& dir);
TopicModel load_checkpoint(const std::string& dir);

}  // namespace taxtopics
