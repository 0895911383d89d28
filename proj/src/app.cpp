#include "taxtopics/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "taxtopics/bootstrap.hpp"
#include "taxtopics/corpus.hpp"
#include "taxtopics/lda.hpp"
#include "taxtopics/lp.hpp"
#include "taxtopics/news.hpp"
#include "taxtopics/ols.hpp"
#include "taxtopics/prevalence.hpp"
#include "taxtopics/seeding.hpp"
#include "taxtopics/synthlab.hpp"
#include "taxtopics/tsframe.hpp"
#include "taxtopics/var.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace taxtopics {
namespace app {

// fixture.cpp
void generate_pipeline_fixture(const json& cfg);

json default_config() {
  return json{
      {"io",
       {{"output_dir", "out"},
        {"documents", "documents.jsonl"},
        {"series", "series.csv"},
        {"stopwords", "data/stopwords_en.txt"},
        {"lexicon_increase", "data/lexicon_tax_increase.txt"},
        {"lexicon_decrease", "data/lexicon_tax_decrease.txt"}}},
      {"corpus",
       {{"min_doc_freq", 20},
        {"min_pair_count", 20},
        {"chi2_threshold", 10.83},
        {"lemmatize", true}}},
      {"lda1",
       {{"n_topics", 25},
        {"total_iters", 15000},
        {"burn_in", 10000},
        {"gamma_shape", 0.01},
        {"gamma_scale", 100.0},
        {"fixed_point_tol", 0.01},
        {"rng_seed", 1},
        {"thin", 1},
        {"trace_every", 0},
        {"n_threads", 1}}},
      {"lda2",
       {{"total_iters", 15000},
        {"burn_in", 10000},
        {"gamma_shape", 0.01},
        {"gamma_scale", 100.0},
        {"fixed_point_tol", 0.01},
        {"rng_seed", 2},
        {"thin", 1},
        {"trace_every", 0},
        {"n_threads", 1}}},
      {"seeding",
       {{"m1", 100.0},
        {"m2", 0.01},
        {"target_sum", 10000.0},
        {"anchor_terms", json::array({"tax"})},
        {"min_dominance_ratio", 10.0}}},
      {"prevalence", {{"checkpoint", "step2"}}},
      {"news",
       {{"h", 1},
        {"p1", 3},
        {"p2", 5},
        {"appendix_indexing", true},
        {"projection_lags", 6},
        {"prev_columns", json::array({"topic_0", "topic_1"})},
        {"tax_all_columns",
         json::array({"dtax_pv_all", "dtax_impl_all"})},
        {"tax_exo_column", "dtax_pv_exo"}}},
      {"lp",
       {{"h_max", 20},
        {"trend_order", 2},
        {"response", "log_gdp"},
        {"controls", json::array()},
        {"run_var_comparison", false},
        {"var_lags", 12},
        {"lp_iv",
         {{"enabled", false},
          {"endog", ""},
          {"instrument_lags", 3},
          {"endog_lead", 1}}}}},
      {"bootstrap",
       {{"replicates", 1999},
        {"block_length", 12},
        {"seed", 7},
        {"n_threads", 1},
        {"integration", json::object()}}},
      {"simulate",
       {{"kind", "pipeline_fixture"},
        {"seed", 42},
        {"n_docs", 200},
        {"output_documents", "documents.jsonl"},
        {"output_series", "series.csv"}}}};
}

namespace {

// schema skeleton; "*" marks free-form maps, arrays hold an element template
json config_schema() {
  json schema = default_config();
  schema["bootstrap"]["integration"] = json{{"*", 0}};
  schema["lp"]["controls"] =
      json::array({{{"column", ""}, {"min_lag", 0}, {"max_lag", 0}}});
  return schema;
}

void validate_node(const json& user, const json& schema,
                   const std::string& path) {
  if (user.is_object()) {
    if (!schema.is_object())
      throw std::runtime_error("config: unexpected object at " + path);
    const bool free_form = schema.contains("*");
    for (const auto& [key, value] : user.items()) {
      if (free_form) continue;
      if (!schema.contains(key))
        throw std::runtime_error("config: unknown key '" +
                                 (path.empty() ? key : path + "." + key) +
                                 "'");
      validate_node(value, schema.at(key),
                    path.empty() ? key : path + "." + key);
    }
  } else if (user.is_array() && schema.is_array() && !schema.empty()) {
    for (std::size_t i = 0; i < user.size(); ++i)
      if (user[i].is_object())
        validate_node(user[i], schema[0], path + "[" + std::to_string(i) + "]");
  }
}

void merge_over(json& base, const json& user) {
  for (const auto& [key, value] : user.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object())
      merge_over(base[key], value);
    else
      base[key] = value;
  }
}

std::string out_path(const json& cfg, const std::string& name) {
  return (fs::path(cfg.at("io").at("output_dir").get<std::string>()) / name)
      .string();
}

void require_artifact(const std::string& path, const std::string& what) {
  if (!fs::exists(path))
    throw std::runtime_error("missing upstream artifact: " + what + " (" +
                             path + "); run the producing subcommand first");
}

void write_manifest(const json& cfg, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json manifest{{"command", command},
                {"version", kVersion},
                {"config", cfg},
                {"inputs", json::object()},
                {"outputs", outputs}};
  for (const auto& p : inputs) manifest["inputs"][p] = file_hash_hex(p);
  std::ofstream out(out_path(cfg, "manifest_" + command + ".json"));
  if (!out) throw std::runtime_error("cannot write manifest");
  out << manifest.dump(2) << '\n';
}

LdaConfig lda_config_from(const json& section) {
  LdaConfig c;
  if (section.contains("n_topics")) c.n_topics = section.at("n_topics");
  c.total_iters = section.at("total_iters");
  c.burn_in = section.at("burn_in");
  c.gamma_shape = section.at("gamma_shape");
  c.gamma_scale = section.at("gamma_scale");
  c.fixed_point_tol = section.at("fixed_point_tol");
  c.rng_seed = section.at("rng_seed").get<std::uint64_t>();
  c.thin = section.at("thin");
  c.trace_every = section.at("trace_every");
  c.n_threads = section.at("n_threads");
  return c;
}

BowCorpus load_built_corpus(const json& cfg) {
  const std::string vocab = out_path(cfg, "vocab.tsv");
  const std::string trip = out_path(cfg, "corpus.tsv");
  const std::string meta = out_path(cfg, "corpus_meta.tsv");
  require_artifact(vocab, "vocabulary");
  require_artifact(trip, "corpus triplets");
  require_artifact(meta, "corpus metadata");
  return read_corpus_tsv(trip, meta, vocab);
}

Lexicon load_lexicon(const std::string& name, const std::string& path) {
  Lexicon lex;
  lex.name = name;
  lex.terms = load_term_set(path);
  if (lex.terms.empty())
    throw std::runtime_error("lexicon '" + name + "' is empty: " + path);
  return lex;
}

std::vector<RegressorSpec> control_specs(const json& cfg) {
  std::vector<RegressorSpec> out;
  for (const auto& c : cfg.at("lp").at("controls")) {
    RegressorSpec spec;
    spec.column = c.at("column");
    spec.min_lag = c.at("min_lag");
    spec.max_lag = c.at("max_lag");
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace

void validate_config(const json& user) {
  validate_node(user, config_schema(), "");
}

void apply_override(json& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::runtime_error("--set expects key.path=value, got '" +
                             assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (...) {
    value = raw;  // plain string
  }

  json* node = &cfg;
  std::size_t start = 0;
  for (;;) {
    auto dot = path.find('.', start);
    const std::string key = path.substr(
        start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw std::runtime_error("--set: empty key in " + path);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

json load_config(const std::string& path,
                 const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json user = json::parse(in);
  json cfg = default_config();
  merge_over(cfg, user);
  for (const auto& o : overrides) apply_override(cfg, o);
  validate_config(cfg);
  return cfg;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return std::string(hex);
}

void cmd_preprocess(const json& cfg) {
  const std::string docs_path = cfg.at("io").at("documents");
  const std::string stop_path = cfg.at("io").at("stopwords");
  require_artifact(docs_path, "documents");
  require_artifact(stop_path, "stopword list");

  auto raw = read_documents_jsonl(docs_path);
  StopwordSet stopwords = load_term_set(stop_path);

  CorpusConfig ccfg;
  ccfg.min_doc_freq = cfg.at("corpus").at("min_doc_freq");
  ccfg.min_pair_count = cfg.at("corpus").at("min_pair_count");
  ccfg.chi2_threshold = cfg.at("corpus").at("chi2_threshold");
  ccfg.lemmatize = cfg.at("corpus").at("lemmatize");

  RuleLemmatizer rule;
  IdentityLemmatizer identity;
  const Lemmatizer& lemmatizer =
      ccfg.lemmatize ? static_cast<const Lemmatizer&>(rule)
                     : static_cast<const Lemmatizer&>(identity);

  auto result = build_corpus(raw, stopwords, lemmatizer, ccfg);

  fs::create_directories(cfg.at("io").at("output_dir").get<std::string>());
  write_vocabulary_tsv(result.corpus.vocab, out_path(cfg, "vocab.tsv"));
  write_corpus_tsv(result.corpus, out_path(cfg, "corpus.tsv"),
                   out_path(cfg, "corpus_meta.tsv"));
  write_dropped_log(result.dropped, out_path(cfg, "dropped.tsv"));

  std::cerr << "[preprocess] " << result.corpus.docs.size() << " documents, "
            << result.corpus.vocab.size() << " terms (" << result.n_bigrams
            << " detected bigrams), " << result.dropped.size()
            << " dropped\n";
  write_manifest(cfg, "preprocess", {docs_path, stop_path},
                 {"vocab.tsv", "corpus.tsv", "corpus_meta.tsv", "dropped.tsv"});
}

void cmd_lda_step1(const json& cfg) {
  BowCorpus corpus = load_built_corpus(cfg);
  LdaConfig lcfg = lda_config_from(cfg.at("lda1"));
  TopicModel model = run_chain(corpus, lcfg);
  save_checkpoint(model, out_path(cfg, "step1"));
  write_manifest(cfg, "lda_step1",
                 {out_path(cfg, "vocab.tsv"), out_path(cfg, "corpus.tsv"),
                  out_path(cfg, "corpus_meta.tsv")},
                 {"step1"});
}

void cmd_seed(const json& cfg) {
  BowCorpus corpus = load_built_corpus(cfg);
  require_artifact(out_path(cfg, "step1"), "step-1 checkpoint");
  TopicModel step1 = load_checkpoint(out_path(cfg, "step1"));

  SeedConfig scfg;
  scfg.m1 = cfg.at("seeding").at("m1");
  scfg.m2 = cfg.at("seeding").at("m2");
  scfg.target_sum = cfg.at("seeding").at("target_sum");
  scfg.anchor_terms =
      cfg.at("seeding").at("anchor_terms").get<std::vector<std::string>>();
  scfg.min_dominance_ratio = cfg.at("seeding").at("min_dominance_ratio");
  scfg.validate();

  auto lex_inc = load_lexicon(
      "tax_increase", cfg.at("io").at("lexicon_increase"));
  auto lex_dec = load_lexicon(
      "tax_decrease", cfg.at("io").at("lexicon_decrease"));

  SeedingReport report;
  report.topic = identify_topic(step1, corpus.vocab, scfg.anchor_terms);
  if (scfg.min_dominance_ratio > 0 &&
      report.topic.dominance_ratio < scfg.min_dominance_ratio)
    throw std::runtime_error(
        "identified tax topic fails the dominance-ratio floor (" +
        std::to_string(report.topic.dominance_ratio) + " < " +
        std::to_string(scfg.min_dominance_ratio) + ")");

  auto inc_res = resolve_lexicon(lex_inc, corpus.vocab);
  auto dec_res = resolve_lexicon(lex_dec, corpus.vocab);
  report.inc_resolved = inc_res.ids.size();
  report.inc_oov = inc_res.oov.size();
  report.dec_resolved = dec_res.ids.size();
  report.dec_oov = dec_res.oov.size();
  report.oov_terms = inc_res.oov;
  report.oov_terms.insert(report.oov_terms.end(), dec_res.oov.begin(),
                          dec_res.oov.end());

  Eigen::VectorXd phi_star = step1.phi.row(report.topic.topic).transpose();
  auto [eta_inc, eta_dec] =
      build_seeded_priors(phi_star, inc_res, dec_res, scfg, lex_inc, lex_dec);
  Eigen::MatrixXd priors = assemble_step2_priors(
      step1.phi, report.topic.topic, eta_inc, eta_dec, scfg.target_sum);

  {
    std::ofstream out(out_path(cfg, "seeded_priors.tsv"));
    if (!out) throw std::runtime_error("cannot write seeded_priors.tsv");
    out.precision(17);
    for (Eigen::Index r = 0; r < priors.rows(); ++r) {
      for (Eigen::Index c = 0; c < priors.cols(); ++c) {
        if (c) out << '\t';
        out << priors(r, c);
      }
      out << '\n';
    }
  }
  write_seeding_report(report, out_path(cfg, "seeding_report.json"));
  write_manifest(cfg, "seed",
                 {out_path(cfg, "step1") + "/phi.tsv",
                  cfg.at("io").at("lexicon_increase").get<std::string>(),
                  cfg.at("io").at("lexicon_decrease").get<std::string>()},
                 {"seeded_priors.tsv", "seeding_report.json"});
}

void cmd_lda_step2(const json& cfg) {
  BowCorpus corpus = load_built_corpus(cfg);
  const std::string priors_path = out_path(cfg, "seeded_priors.tsv");
  require_artifact(priors_path, "seeded priors");

  // dense K+1 x V matrix written by cmd_seed
  std::vector<std::vector<double>> rows;
  {
    std::ifstream in(priors_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::size_t start = 0;
      while (start <= line.size()) {
        auto pos = line.find('\t', start);
        auto end = pos == std::string::npos ? line.size() : pos;
        row.push_back(std::stod(line.substr(start, end - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
      }
      rows.push_back(std::move(row));
    }
  }
  Eigen::MatrixXd priors(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) priors(r, c) = rows[r][c];

  LdaConfig lcfg = lda_config_from(cfg.at("lda2"));
  lcfg.n_topics = static_cast<int>(priors.rows());
  lcfg.optimize_eta = false;
  TopicModel model = run_chain(corpus, lcfg, priors);
  save_checkpoint(model, out_path(cfg, "step2"));
  write_manifest(cfg, "lda_step2",
                 {out_path(cfg, "corpus.tsv"), priors_path}, {"step2"});
}

void cmd_prevalence(const json& cfg) {
  const std::string which = cfg.at("prevalence").at("checkpoint");
  const std::string ckpt = out_path(cfg, which);
  require_artifact(ckpt, which + " checkpoint");
  require_artifact(out_path(cfg, "corpus_meta.tsv"), "corpus metadata");

  TopicModel model = load_checkpoint(ckpt);

  // dates in corpus_meta row order match theta row order
  std::vector<Date> dates;
  {
    std::ifstream in(out_path(cfg, "corpus_meta.tsv"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto tab1 = line.find('\t');
      auto tab2 = line.find('\t', tab1 + 1);
      dates.push_back(parse_date(line.substr(tab1 + 1, tab2 - tab1 - 1)));
    }
  }
  if (static_cast<Eigen::Index>(dates.size()) != model.theta.rows())
    throw std::runtime_error(
        "prevalence: checkpoint and corpus metadata disagree on document "
        "count");

  PrevalenceSeries series = prevalence(model.theta, dates);
  write_prevalence_csv(series, out_path(cfg, "prevalence.csv"));
  write_manifest(cfg, "prevalence",
                 {ckpt + "/theta.tsv", out_path(cfg, "corpus_meta.tsv")},
                 {"prevalence.csv"});
}

void cmd_news(const json& cfg) {
  const std::string series_path = cfg.at("io").at("series");
  const std::string prev_path = out_path(cfg, "prevalence.csv");
  require_artifact(series_path, "economic series");
  require_artifact(prev_path, "prevalence series");

  TsFrame econ = read_tsframe_csv(series_path);
  PrevalenceSeries prev = read_prevalence_csv(prev_path);

  TsFrame pf(prev.quarters);
  const auto& ncfg = cfg.at("news");
  auto prev_cols = ncfg.at("prev_columns").get<std::vector<std::string>>();
  for (const auto& name : prev_cols) {
    if (name.rfind("topic_", 0) != 0)
      throw std::runtime_error("news: prev_columns must be topic_<k> names");
    const int k = std::stoi(name.substr(6));
    if (k < 0 || k >= prev.n_topics())
      throw std::runtime_error("news: prevalence has no column " + name);
    pf.add(name, prev.values.col(k));
  }
  TsFrame frame = TsFrame::merge(econ, pf);

  auto tax_all = ncfg.at("tax_all_columns").get<std::vector<std::string>>();
  const std::string tax_exo = ncfg.at("tax_exo_column");
  const int proj_lags = ncfg.at("projection_lags");

  // est1: filter prevalence on recent tax changes
  for (const auto& c : prev_cols)
    frame.add(c + "_perp", project_out(frame, c, tax_all, proj_lags));
  // est2: filter the narrative on the event rows
  auto mask = nonzero_mask(frame, tax_exo);
  frame.add("news_perp",
            project_out(frame, tax_exo, tax_all, proj_lags, true, &mask));

  NewsConfig nc;
  nc.h = ncfg.at("h");
  nc.p1 = ncfg.at("p1");
  nc.p2 = ncfg.at("p2");
  nc.appendix_indexing = ncfg.at("appendix_indexing");

  std::vector<std::string> prev_perp;
  for (const auto& c : prev_cols) prev_perp.push_back(c + "_perp");
  NewsResult news =
      build_news(frame, prev_perp, "news_perp", tax_all, mask, nc);

  write_news_csv(frame, news.news, out_path(cfg, "news.csv"));
  {
    json report{{"h", nc.h},
                {"p1", nc.p1},
                {"p2", nc.p2},
                {"n_masked", news.n_masked},
                {"r2", news.r2},
                {"coefficients", json::object()}};
    for (Eigen::Index i = 0; i < news.beta.size(); ++i)
      report["coefficients"][news.names[i]] = news.beta(i);
    std::ofstream out(out_path(cfg, "news_report.json"));
    out << report.dump(2) << '\n';
  }
  write_manifest(cfg, "news", {series_path, prev_path},
                 {"news.csv", "news_report.json"});
}

void cmd_lp(const json& cfg) {
  const std::string series_path = cfg.at("io").at("series");
  const std::string prev_path = out_path(cfg, "prevalence.csv");
  const std::string news_path = out_path(cfg, "news.csv");
  require_artifact(series_path, "economic series");
  require_artifact(prev_path, "prevalence series");
  require_artifact(news_path, "news series");

  const auto& lcfg = cfg.at("lp");
  const auto& ncfg = cfg.at("news");
  const auto& bcfg = cfg.at("bootstrap");
  const std::string y_col = lcfg.at("response");
  const int h_max = lcfg.at("h_max");

  TsFrame econ = read_tsframe_csv(series_path);
  PrevalenceSeries prev = read_prevalence_csv(prev_path);
  TsFrame news_frame = read_tsframe_csv(news_path);

  auto prev_cols = ncfg.at("prev_columns").get<std::vector<std::string>>();
  TsFrame pf(prev.quarters);
  for (const auto& name : prev_cols) {
    const int k = std::stoi(name.substr(6));
    pf.add(name, prev.values.col(k));
  }
  TsFrame frame = TsFrame::merge(TsFrame::merge(econ, pf), news_frame);

  // integration flags from config; prevalence shares and sparse tax
  // narratives are stationary by construction
  for (const auto& name : frame.names()) {
    const auto& integ = bcfg.at("integration");
    if (integ.contains(name))
      frame.set_integration(name, integ.at(name).get<int>());
  }
  for (const auto& c : prev_cols)
    if (!frame.integration_known(c)) frame.set_integration(c, 0);
  for (const auto& c :
       ncfg.at("tax_all_columns").get<std::vector<std::string>>())
    if (!frame.integration_known(c)) frame.set_integration(c, 0);
  if (!frame.integration_known(ncfg.at("tax_exo_column").get<std::string>()))
    frame.set_integration(ncfg.at("tax_exo_column").get<std::string>(), 0);
  if (!frame.integration_known("news_h")) frame.set_integration("news_h", 0);

  add_lead_columns(frame, y_col, h_max);
  for (int h = 1; h <= h_max; ++h)
    frame.set_integration(lead_col_name(y_col, h), frame.integration(y_col));

  LpConfig lp_cfg;
  lp_cfg.h_max = h_max;
  lp_cfg.trend_order = lcfg.at("trend_order");
  lp_cfg.controls = control_specs(cfg);
  lp_cfg.use_lead_columns = true;

  // point estimate on the news series as built by cmd_news
  LpResult point = local_projection(frame, y_col, {"news_h"}, lp_cfg);

  // replicates rebuild the news measure from the resampled series
  NewsConfig nc;
  nc.h = ncfg.at("h");
  nc.p1 = ncfg.at("p1");
  nc.p2 = ncfg.at("p2");
  nc.appendix_indexing = ncfg.at("appendix_indexing");
  auto tax_all = ncfg.at("tax_all_columns").get<std::vector<std::string>>();
  const std::string tax_exo = ncfg.at("tax_exo_column");
  const int proj_lags = ncfg.at("projection_lags");

  PipelineFn pipeline = [&, tax_all, tax_exo, proj_lags, prev_cols, nc,
                         lp_cfg, y_col](const TsFrame& input) {
    TsFrame rep = input;  // resampled copy, news reconstructed inside
    for (const auto& c : prev_cols)
      rep.add(c + "_perp", project_out(rep, c, tax_all, proj_lags));
    auto mask = nonzero_mask(rep, tax_exo);
    rep.add("news_perp",
            project_out(rep, tax_exo, tax_all, proj_lags, true, &mask));
    std::vector<std::string> prev_perp;
    for (const auto& c : prev_cols) prev_perp.push_back(c + "_perp");
    NewsResult news = build_news(rep, prev_perp, "news_perp", tax_all, mask, nc);
    rep.add("news_rebuilt", news.news);
    LpConfig c2 = lp_cfg;
    LpResult r = local_projection(rep, y_col, {"news_rebuilt"}, c2);
    return Eigen::VectorXd(r.beta.col(0));
  };

  BootstrapConfig bs;
  bs.n_replicates = bcfg.at("replicates");
  bs.block_length = bcfg.at("block_length");
  bs.seed = bcfg.at("seed").get<std::uint64_t>();
  bs.h_max = h_max;
  bs.n_threads = bcfg.at("n_threads");

  // the bootstrap frame must not carry the point-estimate news column: the
  // replicates rebuild it
  TsFrame boot_frame(frame.quarters());
  for (const auto& name : frame.names()) {
    if (name == "news_h") continue;
    boot_frame.add(name, frame.col(name));
    if (frame.integration_known(name))
      boot_frame.set_integration(name, frame.integration(name));
  }

  IrfResult irf = mbb_pipeline_ci(boot_frame, pipeline, bs);
  irf.beta = point.beta.col(0);  // point estimate from the shipped news.csv
  irf.n_obs = point.n_obs;
  write_irf_csv(irf, out_path(cfg, "irf.csv"));

  std::vector<std::string> outputs{"irf.csv"};

  if (lcfg.at("run_var_comparison").get<bool>()) {
    std::vector<std::string> var_cols{"news_h", y_col};
    VarFit vf = fit_var(frame, var_cols, lcfg.at("var_lags"),
                        lcfg.at("trend_order"));
    IrfResult virf = var_choleski_irf(vf, 0, h_max, 1);
    write_irf_csv(virf, out_path(cfg, "var_irf.csv"));
    outputs.push_back("var_irf.csv");
  }

  if (lcfg.at("lp_iv").at("enabled").get<bool>()) {
    LpIvConfig ivc;
    ivc.h_max = h_max;
    ivc.trend_order = lcfg.at("trend_order");
    ivc.controls = lp_cfg.controls;
    ivc.endog_lead = lcfg.at("lp_iv").at("endog_lead");
    const int zl = lcfg.at("lp_iv").at("instrument_lags");
    for (const auto& c : prev_cols) ivc.instruments.push_back({c, 0, zl});
    ivc.use_lead_columns = true;
    LpIvResult iv =
        lp_iv(frame, y_col, lcfg.at("lp_iv").at("endog"), ivc);
    write_irf_csv(iv.irf, out_path(cfg, "lp_iv_irf.csv"));
    json rep{{"first_stage_f", iv.first_stage_f},
             {"weak_instruments", iv.weak_instruments}};
    std::ofstream out(out_path(cfg, "lp_iv_report.json"));
    out << rep.dump(2) << '\n';
    outputs.push_back("lp_iv_irf.csv");
    outputs.push_back("lp_iv_report.json");
  }

  write_manifest(cfg, "lp", {series_path, prev_path, news_path}, outputs);
}

void cmd_simulate(const json& cfg) {
  const auto& scfg = cfg.at("simulate");
  const std::string kind = scfg.at("kind");
  fs::create_directories(cfg.at("io").at("output_dir").get<std::string>());

  if (kind == "pipeline_fixture") {
    generate_pipeline_fixture(cfg);
  } else if (kind == "var") {
    const std::uint64_t seed = scfg.at("seed").get<std::uint64_t>();
    Eigen::MatrixXd a(2, 2);
    a << 0.5, 0.1, 0.0, 0.3;
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd y = synthlab::simulate_var({a}, sigma, 400, 100, seed);
    std::vector<Quarter> quarters;
    Quarter q{1950, 1};
    for (int t = 0; t < y.rows(); ++t) {
      quarters.push_back(q);
      q = q.next();
    }
    TsFrame frame(quarters);
    frame.add("y0", y.col(0));
    frame.add("y1", y.col(1));
    write_tsframe_csv(frame, out_path(cfg, "simulated_var.csv"));
    write_manifest(cfg, "simulate", {}, {"simulated_var.csv"});
  } else {
    throw std::runtime_error("simulate: unknown kind '" + kind + "'");
  }
}

void run_command(const std::string& name, const json& cfg) {
  if (name == "preprocess") return cmd_preprocess(cfg);
  if (name == "lda-step1") return cmd_lda_step1(cfg);
  if (name == "seed") return cmd_seed(cfg);
  if (name == "lda-step2") return cmd_lda_step2(cfg);
  if (name == "prevalence") return cmd_prevalence(cfg);
  if (name == "news") return cmd_news(cfg);
  if (name == "lp") return cmd_lp(cfg);
  if (name == "simulate") return cmd_simulate(cfg);
  throw std::runtime_error("unknown subcommand: " + name);
}

}  // namespace app
}  // namespace taxtopics
