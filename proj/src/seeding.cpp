#include "taxtopics/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace taxtopics {

void SeedConfig::validate() const {
  if (!(m1 > 1.0 && 1.0 > m2 && m2 > 0.0))
    throw std::invalid_argument("seeding: need m1 > 1 > m2 > 0");
  if (!(target_sum > 0.0))
    throw std::invalid_argument("seeding: target_sum must be > 0");
  if (anchor_terms.empty())
    throw std::invalid_argument("seeding: no anchor terms");
}

TopicIdReport identify_topic(const TopicModel& model, const Vocabulary& vocab,
                             const std::vector<std::string>& anchors) {
  std::vector<std::uint32_t> ids;
  for (const auto& a : anchors)
    if (auto id = vocab.lookup(a)) ids.push_back(*id);
  if (ids.empty())
    throw std::runtime_error("identify_topic: no anchor term in vocabulary");

  const int k_count = static_cast<int>(model.phi.rows());
  std::vector<double> mass(k_count, 0.0);
  for (int k = 0; k < k_count; ++k)
    for (auto id : ids) mass[k] += model.phi(k, id);

  TopicIdReport rep;
  for (int k = 0; k < k_count; ++k) {
    if (mass[k] > rep.anchor_mass) {
      rep.anchor_mass = mass[k];
      rep.topic = k;
    }
  }
  for (int k = 0; k < k_count; ++k) {
    if (k == rep.topic) continue;
    rep.runner_up_mass = std::max(rep.runner_up_mass, mass[k]);
    if (mass[k] == rep.anchor_mass) rep.tie = true;
  }
  rep.dominance_ratio = rep.runner_up_mass > 0.0
                            ? rep.anchor_mass / rep.runner_up_mass
                            : std::numeric_limits<double>::infinity();
  if (rep.tie)
    std::cerr << "[seeding] anchor-mass tie; picking topic " << rep.topic
              << "\n";
  return rep;
}

LexiconResolution resolve_lexicon(const Lexicon& lex, const Vocabulary& vocab) {
  if (lex.terms.empty())
    return {};
  LexiconResolution res;
  std::vector<std::string> sorted(lex.terms.begin(), lex.terms.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& t : sorted) {
    if (auto id = vocab.lookup(t))
      res.ids.push_back(*id);
    else
      res.oov.push_back(t);
  }
  return res;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> build_seeded_priors(
    const Eigen::VectorXd& phi_star, const LexiconResolution& lex_inc,
    const LexiconResolution& lex_dec, const SeedConfig& cfg,
    const Lexicon& raw_inc, const Lexicon& raw_dec) {
  cfg.validate();
  for (const auto& t : raw_inc.terms)
    if (raw_dec.terms.count(t))
      throw std::runtime_error("lexicons must be disjoint; both contain '" +
                               t + "'");

  const Eigen::Index v_count = phi_star.size();
  auto build = [&](const std::vector<std::uint32_t>& up,
                   const std::vector<std::uint32_t>& down) {
    Eigen::VectorXd eta = phi_star;
    for (auto i : up) eta(i) *= cfg.m1;
    for (auto i : down) eta(i) *= cfg.m2;
    const double sum = eta.sum();
    if (!(sum > 0.0))
      throw std::runtime_error("seeded prior degenerate (zero mass)");
    return Eigen::VectorXd(eta * (cfg.target_sum / sum));
  };

  (void)v_count;
  return {build(lex_inc.ids, lex_dec.ids), build(lex_dec.ids, lex_inc.ids)};
}

Eigen::MatrixXd assemble_step2_priors(const Eigen::MatrixXd& phi_step1,
                                      int topic_star,
                                      const Eigen::VectorXd& eta_inc,
                                      const Eigen::VectorXd& eta_dec,
                                      double target_sum) {
  const int k_count = static_cast<int>(phi_step1.rows());
  const Eigen::Index v_count = phi_step1.cols();
  if (topic_star < 0 || topic_star >= k_count)
    throw std::invalid_argument("assemble_step2_priors: bad topic index");

  Eigen::MatrixXd priors(k_count + 1, v_count);
  priors.row(0) = eta_inc.transpose();
  priors.row(1) = eta_dec.transpose();
  int row = 2;
  for (int k = 0; k < k_count; ++k) {
    if (k == topic_star) continue;
    const double sum = phi_step1.row(k).sum();
    priors.row(row++) = phi_step1.row(k) * (target_sum / sum);
  }
  return priors;
}

TwoStepResult run_two_step(const BowCorpus& corpus, const LdaConfig& step1_cfg,
                           const Lexicon& lex_inc, const Lexicon& lex_dec,
                           const SeedConfig& seed_cfg,
                           const LdaConfig* step2_cfg_override) {
  seed_cfg.validate();

  TwoStepResult out;
  out.step1 = run_chain(corpus, step1_cfg);

  out.report.topic =
      identify_topic(out.step1, corpus.vocab, seed_cfg.anchor_terms);
  if (seed_cfg.min_dominance_ratio > 0.0 &&
      out.report.topic.dominance_ratio < seed_cfg.min_dominance_ratio)
    throw std::runtime_error(
        "identified tax topic fails the dominance-ratio floor (" +
        std::to_string(out.report.topic.dominance_ratio) + " < " +
        std::to_string(seed_cfg.min_dominance_ratio) + ")");

  auto inc_res = resolve_lexicon(lex_inc, corpus.vocab);
  auto dec_res = resolve_lexicon(lex_dec, corpus.vocab);
  out.report.inc_resolved = inc_res.ids.size();
  out.report.inc_oov = inc_res.oov.size();
  out.report.dec_resolved = dec_res.ids.size();
  out.report.dec_oov = dec_res.oov.size();
  out.report.oov_terms = inc_res.oov;
  out.report.oov_terms.insert(out.report.oov_terms.end(), dec_res.oov.begin(),
                              dec_res.oov.end());
  for (const auto& t : out.report.oov_terms)
    std::cerr << "[seeding] lexicon term not in vocabulary: " << t << "\n";

  Eigen::VectorXd phi_star =
      out.step1.phi.row(out.report.topic.topic).transpose();
  auto [eta_inc, eta_dec] = build_seeded_priors(phi_star, inc_res, dec_res,
                                                seed_cfg, lex_inc, lex_dec);
  out.step2_priors = assemble_step2_priors(
      out.step1.phi, out.report.topic.topic, eta_inc, eta_dec,
      seed_cfg.target_sum);

  LdaConfig step2_cfg = step2_cfg_override ? *step2_cfg_override : step1_cfg;
  step2_cfg.n_topics = static_cast<int>(out.step2_priors.rows());
  step2_cfg.optimize_eta = false;
  if (!step2_cfg_override) step2_cfg.rng_seed = step1_cfg.rng_seed + 1;

  out.step2 = run_chain(corpus, step2_cfg, out.step2_priors);
  return out;
}

void write_seeding_report(const SeedingReport& report,
                          const std::string& path) {
  nlohmann::json j{
      {"topic_star", report.topic.topic},
      {"anchor_mass", report.topic.anchor_mass},
      {"runner_up_mass", report.topic.runner_up_mass},
      {"dominance_ratio", report.topic.dominance_ratio},
      {"tie", report.topic.tie},
      {"lexicon_increase",
       {{"resolved", report.inc_resolved}, {"oov", report.inc_oov}}},
      {"lexicon_decrease",
       {{"resolved", report.dec_resolved}, {"oov", report.dec_oov}}},
      {"oov_terms", report.oov_terms}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace taxtopics
