#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "taxtopics/corpus.hpp"
#include "taxtopics/lda.hpp"

namespace taxtopics {

struct Lexicon {
  std::string name;
  std::unordered_set<std::string> terms;
};

struct SeedConfig {
  double m1 = 100.0;       // up-weight for own-lexicon terms
  double m2 = 0.01;        // down-weight for the opposite lexicon
  double target_sum = 10000.0;  // pseudo-token mass per prior row
  std::vector<std::string> anchor_terms = {"tax"};
  double min_dominance_ratio = 10.0;

  void validate() const;
};

struct TopicIdReport {
  int topic = -1;
  double anchor_mass = 0.0;
  double runner_up_mass = 0.0;
  double dominance_ratio = 0.0;  // inf when the runner-up mass is zero
  bool tie = false;
};

// argmax over topics of summed phi mass on the anchor terms; ties pick the
// lowest index and set the tie flag
TopicIdReport identify_topic(const TopicModel& model, const Vocabulary& vocab,
                             const std::vector<std::string>& anchors);

struct LexiconResolution {
  std::vector<std::uint32_t> ids;       // resolved vocabulary indices
  std::vector<std::string> oov;         // entries not in the vocabulary
};

LexiconResolution resolve_lexicon(const Lexicon& lex, const Vocabulary& vocab);

// eta_inc/eta_dec rows built from the general-topic distribution: own
// lexicon terms scaled by m1, opposite by m2, everything rescaled so the
// row sums to target_sum; throws if the lexicons overlap
std::pair<Eigen::VectorXd, Eigen::VectorXd> build_seeded_priors(
    const Eigen::VectorXd& phi_star, const LexiconResolution& lex_inc,
    const LexiconResolution& lex_dec, const SeedConfig& cfg,
    const Lexicon& raw_inc, const Lexicon& raw_dec);

// rows 0 and 1 are the seeded pair; rows 2..K carry the step-1 topics
// except topic_star, each rescaled to target_sum, order preserved
Eigen::MatrixXd assemble_step2_priors(const Eigen::MatrixXd& phi_step1,
                                      int topic_star,
                                      const Eigen::VectorXd& eta_inc,
                                      const Eigen::VectorXd& eta_dec,
                                      double target_sum);

struct SeedingReport {
  TopicIdReport topic;
  std::size_t inc_resolved = 0, inc_oov = 0;
  std::size_t dec_resolved = 0, dec_oov = 0;
  std::vector<std::string> oov_terms;
};

struct TwoStepResult {
  TopicModel step1;
  TopicModel step2;
  SeedingReport report;
  Eigen::MatrixXd step2_priors;
};

// step 1 with symmetric estimated eta, topic identification, prior
// construction, then step 2 with n_topics+1 topics and the fixed prior
TwoStepResult run_two_step(const BowCorpus& corpus, const LdaConfig& step1_cfg,
                           const Lexicon& lex_inc, const Lexicon& lex_dec,
                           const SeedConfig& seed_cfg,
                           const LdaConfig* step2_cfg_override = nullptr);

void write_seeding_report(const SeedingReport& report, const std::string& path);

}  // namespace taxtopics
