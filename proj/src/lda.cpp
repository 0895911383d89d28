#include "taxtopics/lda.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "taxtopics/special.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace taxtopics {

void LdaConfig::validate() const {
  if (n_topics < 2) throw std::invalid_argument("lda: n_topics must be >= 2");
  if (!(burn_in > 0 && burn_in < total_iters))
    throw std::invalid_argument("lda: need 0 < burn_in < total_iters");
  if (!(gamma_shape > 0.0) || !(gamma_scale > 0.0))
    throw std::invalid_argument("lda: gamma shape/scale must be > 0");
  if (thin < 1) throw std::invalid_argument("lda: thin must be >= 1");
}

std::vector<std::uint32_t> expand_tokens(const BowDocument& doc) {
  std::vector<std::uint32_t> out;
  out.reserve(doc.n_tokens);
  for (const auto& [term, count] : doc.counts)
    for (std::uint32_t c = 0; c < count; ++c) out.push_back(term);
  return out;
}

void GibbsState::set_symmetric_eta(double value) {
  eta.setConstant(value);
  eta_row_sum.setConstant(value * n_terms());
  eta_symmetric = true;
}

bool GibbsState::counts_consistent() const {
  Eigen::MatrixXi dk = Eigen::MatrixXi::Zero(n_docs(), n_topics());
  Eigen::MatrixXi ki = Eigen::MatrixXi::Zero(n_topics(), n_terms());
  Eigen::VectorXi k = Eigen::VectorXi::Zero(n_topics());
  for (std::size_t t = 0; t < z.size(); ++t) {
    if (z[t] < 0 || z[t] >= n_topics()) return false;
    ++dk(token_doc[t], z[t]);
    ++ki(z[t], token_term[t]);
    ++k(z[t]);
  }
  return dk == n_dk && ki == n_ki && k == n_k;
}

GibbsState init_state(const BowCorpus& corpus, int n_topics, Rng& rng) {
  if (corpus.docs.empty()) throw std::invalid_argument("lda: empty corpus");
  const int d_count = static_cast<int>(corpus.docs.size());
  const int v_count = static_cast<int>(corpus.vocab.size());

  GibbsState st;
  st.doc_offset.push_back(0);
  for (int d = 0; d < d_count; ++d) {
    auto toks = expand_tokens(corpus.docs[d]);
    for (auto t : toks) {
      if (t >= static_cast<std::uint32_t>(v_count))
        throw std::invalid_argument("lda: corpus/vocabulary mismatch");
      st.token_term.push_back(t);
      st.token_doc.push_back(static_cast<std::uint32_t>(d));
    }
    st.doc_offset.push_back(static_cast<std::uint32_t>(st.token_term.size()));
  }

  st.n_dk = Eigen::MatrixXi::Zero(d_count, n_topics);
  st.n_ki = Eigen::MatrixXi::Zero(n_topics, v_count);
  st.n_k = Eigen::VectorXi::Zero(n_topics);
  st.alpha.assign(n_topics, 1.0);
  st.eta = Eigen::MatrixXd::Constant(n_topics, v_count, 1.0);
  st.eta_row_sum = Eigen::VectorXd::Constant(n_topics, double(v_count));
  st.eta_symmetric = true;

  st.z.resize(st.token_term.size());
  for (std::size_t t = 0; t < st.z.size(); ++t) {
    int k = static_cast<int>(rng.uniform_int(n_topics));
    st.z[t] = k;
    ++st.n_dk(st.token_doc[t], k);
    ++st.n_ki(k, st.token_term[t]);
    ++st.n_k(k);
  }
  return st;
}

void conditional_topic_weights(const GibbsState& state, int d,
                               std::uint32_t term,
                               std::vector<double>& weights) {
  const int k_count = state.n_topics();
  weights.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    weights[k] = (state.n_dk(d, k) + state.alpha[k]) *
                 (state.n_ki(k, term) + state.eta(k, term)) /
                 (state.n_k(k) + state.eta_row_sum(k));
  }
}

void gibbs_sweep(GibbsState& state, Rng& rng) {
  std::vector<double> weights(state.n_topics());
  const std::size_t n = state.z.size();
  for (std::size_t t = 0; t < n; ++t) {
    const int d = static_cast<int>(state.token_doc[t]);
    const std::uint32_t w = state.token_term[t];
    const int old_k = state.z[t];
    --state.n_dk(d, old_k);
    --state.n_ki(old_k, w);
    --state.n_k(old_k);

    conditional_topic_weights(state, d, w, weights);
    const int new_k = static_cast<int>(rng.categorical(weights));

    state.z[t] = new_k;
    ++state.n_dk(d, new_k);
    ++state.n_ki(new_k, w);
    ++state.n_k(new_k);
  }
}

void gibbs_sweep_parallel(GibbsState& state, std::uint64_t seed, int sweep_id,
                          int n_threads) {
#ifndef _OPENMP
  (void)sweep_id;
  (void)n_threads;
  Rng rng(seed);
  gibbs_sweep(state, rng);
#else
  const int k_count = state.n_topics();
  const int v_count = state.n_terms();
  const int d_count = state.n_docs();
  // sweep-start snapshot shared by all shards
  const Eigen::MatrixXi ki0 = state.n_ki;
  const Eigen::VectorXi k0 = state.n_k;

  std::vector<Eigen::MatrixXi> delta_ki(n_threads);
  std::vector<Eigen::VectorXi> delta_k(n_threads);

#pragma omp parallel num_threads(n_threads)
  {
    const int shard = omp_get_thread_num();
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(sweep_id) *
                                      n_threads +
                                  shard));
    Eigen::MatrixXi dki = Eigen::MatrixXi::Zero(k_count, v_count);
    Eigen::VectorXi dk = Eigen::VectorXi::Zero(k_count);
    std::vector<double> weights(k_count);

    const int lo = static_cast<int>(std::int64_t(d_count) * shard / n_threads);
    const int hi =
        static_cast<int>(std::int64_t(d_count) * (shard + 1) / n_threads);
    for (int d = lo; d < hi; ++d) {
      for (std::uint32_t t = state.doc_offset[d]; t < state.doc_offset[d + 1];
           ++t) {
        const std::uint32_t w = state.token_term[t];
        const int old_k = state.z[t];
        --state.n_dk(d, old_k);
        --dki(old_k, w);
        --dk(old_k);
        for (int k = 0; k < k_count; ++k) {
          const double nki = ki0(k, w) + dki(k, w);
          const double nk = k0(k) + dk(k);
          weights[k] = (state.n_dk(d, k) + state.alpha[k]) *
                       (nki + state.eta(k, w)) / (nk + state.eta_row_sum(k));
          if (weights[k] < 0.0) weights[k] = 0.0;  // stale-count underflow
        }
        const int new_k = static_cast<int>(rng.categorical(weights));
        state.z[t] = new_k;
        ++state.n_dk(d, new_k);
        ++dki(new_k, w);
        ++dk(new_k);
      }
    }
    delta_ki[shard] = std::move(dki);
    delta_k[shard] = std::move(dk);
  }

  for (int s = 0; s < n_threads; ++s) {
    state.n_ki += delta_ki[s];
    state.n_k += delta_k[s];
  }
#endif
}

namespace {

struct FpUpdate {
  std::vector<double> value;
  bool ok = true;
};

}  // namespace

FixedPointResult optimize_alpha(GibbsState& state, double c, double s,
                                double tol) {
  const int k_count = state.n_topics();
  const int d_count = state.n_docs();
  std::vector<double> alpha = state.alpha;
  FixedPointResult res;

  constexpr int kMaxIters = 1000;
  for (int it = 0; it < kMaxIters; ++it) {
    double a = 0.0;
    for (double v : alpha) a += v;
    double denom = 1.0 / s;
    for (int d = 0; d < d_count; ++d) {
      const double nd =
          static_cast<double>(state.doc_offset[d + 1] - state.doc_offset[d]);
      denom += digamma(nd + a) - digamma(a);
    }
    if (denom <= 0.0) {
      std::cerr << "[lda] degenerate alpha update (denominator " << denom
                << " <= 0), leaving alpha unchanged\n";
      return res;
    }
    std::vector<double> next(k_count);
    double max_rel = 0.0;
    for (int k = 0; k < k_count; ++k) {
      double num = c - 1.0;
      for (int d = 0; d < d_count; ++d) {
        const int n = state.n_dk(d, k);
        if (n > 0) num += alpha[k] * (digamma(n + alpha[k]) - digamma(alpha[k]));
      }
      if (num <= 0.0) {
        std::cerr << "[lda] degenerate alpha update (numerator " << num
                  << " <= 0 for topic " << k << "), leaving alpha unchanged\n";
        return res;
      }
      next[k] = num / denom;
      max_rel = std::max(max_rel, std::abs(next[k] - alpha[k]) / alpha[k]);
    }
    alpha = std::move(next);
    ++res.iterations;
    if (max_rel < tol) break;
  }
  state.alpha = std::move(alpha);
  res.updated = true;
  return res;
}

FixedPointResult optimize_eta_symmetric(GibbsState& state, double c, double s,
                                        double tol) {
  if (!state.eta_symmetric)
    throw std::logic_error("optimize_eta_symmetric: eta prior is fixed");
  const int k_count = state.n_topics();
  const int v_count = state.n_terms();
  double eta = state.eta_scalar();
  FixedPointResult res;

  constexpr int kMaxIters = 1000;
  for (int it = 0; it < kMaxIters; ++it) {
    double num = c - 1.0;
    double denom = 1.0 / s;
    const double dig_eta = digamma(eta);
    for (int k = 0; k < k_count; ++k) {
      for (int i = 0; i < v_count; ++i) {
        const int n = state.n_ki(k, i);
        if (n > 0) num += eta * (digamma(n + eta) - dig_eta);
      }
      denom += v_count * (digamma(state.n_k(k) + v_count * eta) -
                          digamma(v_count * eta));
    }
    if (denom <= 0.0 || num <= 0.0) {
      std::cerr << "[lda] degenerate eta update (num " << num << ", denom "
                << denom << "), leaving eta unchanged\n";
      return res;
    }
    const double next = num / denom;
    ++res.iterations;
    const double rel = std::abs(next - eta) / eta;
    eta = next;
    if (rel < tol) break;
  }
  state.set_symmetric_eta(eta);
  res.updated = true;
  return res;
}

Eigen::MatrixXd estimate_theta(const GibbsState& state) {
  const int d_count = state.n_docs();
  const int k_count = state.n_topics();
  double a = 0.0;
  for (double v : state.alpha) a += v;
  Eigen::MatrixXd theta(d_count, k_count);
  for (int d = 0; d < d_count; ++d) {
    const double nd =
        static_cast<double>(state.doc_offset[d + 1] - state.doc_offset[d]);
    for (int k = 0; k < k_count; ++k)
      theta(d, k) = (state.n_dk(d, k) + state.alpha[k]) / (nd + a);
  }
  return theta;
}

Eigen::MatrixXd estimate_phi(const GibbsState& state) {
  const int k_count = state.n_topics();
  const int v_count = state.n_terms();
  Eigen::MatrixXd phi(k_count, v_count);
  for (int k = 0; k < k_count; ++k) {
    const double denom = state.n_k(k) + state.eta_row_sum(k);
    for (int i = 0; i < v_count; ++i)
      phi(k, i) = (state.n_ki(k, i) + state.eta(k, i)) / denom;
  }
  return phi;
}

double collapsed_log_joint(const GibbsState& state) {
  const int d_count = state.n_docs();
  const int k_count = state.n_topics();
  const int v_count = state.n_terms();
  double a = 0.0;
  for (double v : state.alpha) a += v;

  double ll = 0.0;
  for (int d = 0; d < d_count; ++d) {
    const double nd =
        static_cast<double>(state.doc_offset[d + 1] - state.doc_offset[d]);
    ll += std::lgamma(a) - std::lgamma(nd + a);
    for (int k = 0; k < k_count; ++k)
      if (state.n_dk(d, k) > 0)
        ll += std::lgamma(state.n_dk(d, k) + state.alpha[k]) -
              std::lgamma(state.alpha[k]);
  }
  for (int k = 0; k < k_count; ++k) {
    ll += std::lgamma(state.eta_row_sum(k)) -
          std::lgamma(state.n_k(k) + state.eta_row_sum(k));
    for (int i = 0; i < v_count; ++i)
      if (state.n_ki(k, i) > 0)
        ll += std::lgamma(state.n_ki(k, i) + state.eta(k, i)) -
              std::lgamma(state.eta(k, i));
  }
  return ll;
}

TopicModel run_chain(const BowCorpus& corpus, const LdaConfig& config,
                     const std::optional<Eigen::MatrixXd>& eta_prior) {
  config.validate();
  const bool fixed_eta = eta_prior.has_value();
  if (fixed_eta && (eta_prior->rows() != config.n_topics ||
                    eta_prior->cols() !=
                        static_cast<Eigen::Index>(corpus.vocab.size())))
    throw std::invalid_argument("run_chain: eta prior shape mismatch");

  Rng rng(config.rng_seed);
  GibbsState st = init_state(corpus, config.n_topics, rng);
  if (fixed_eta) {
    st.eta = *eta_prior;
    st.eta_row_sum = st.eta.rowwise().sum();
    st.eta_symmetric = false;
  }

  const int d_count = st.n_docs();
  Eigen::MatrixXd theta_sum =
      Eigen::MatrixXd::Zero(d_count, config.n_topics);
  Eigen::MatrixXd phi_sum =
      Eigen::MatrixXd::Zero(config.n_topics, st.n_terms());
  int n_snapshots = 0;
  int first_avg = 0, last_avg = 0;

  for (int m = 1; m <= config.total_iters; ++m) {
    if (config.n_threads > 1)
      gibbs_sweep_parallel(st, config.rng_seed, m, config.n_threads);
    else
      gibbs_sweep(st, rng);

    if (config.optimize_alpha)
      optimize_alpha(st, config.gamma_shape, config.gamma_scale,
                     config.fixed_point_tol);
    if (!fixed_eta && config.optimize_eta)
      optimize_eta_symmetric(st, config.gamma_shape, config.gamma_scale,
                             config.fixed_point_tol);

    if (config.trace_every > 0 && m % config.trace_every == 0)
      std::cerr << "[lda] iter " << m << " log-joint "
                << collapsed_log_joint(st) << "\n";

    if (m > config.burn_in && (m - config.burn_in - 1) % config.thin == 0) {
      theta_sum += estimate_theta(st);
      phi_sum += estimate_phi(st);
      ++n_snapshots;
      if (first_avg == 0) first_avg = m;
      last_avg = m;
    }
  }

  TopicModel model;
  model.theta = theta_sum / n_snapshots;
  model.phi = phi_sum / n_snapshots;
  model.alpha = st.alpha;
  model.eta = st.eta;
  model.config = config;
  model.first_averaged_iter = first_avg;
  model.last_averaged_iter = last_avg;
  return model;
}

// ---- checkpoint io ----

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

void write_dense_tsv(const Eigen::MatrixXd& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << '\t';
      out << fmt(m(r, c));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_dense_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      auto pos = line.find('\t', start);
      auto end = pos == std::string::npos ? line.size() : pos;
      double v = 0;
      auto [p, ec] = std::from_chars(line.data() + start, line.data() + end, v);
      if (ec != std::errc()) throw std::runtime_error("bad number in " + path);
      row.push_back(v);
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix file: " + path);
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size())
      throw std::runtime_error("ragged matrix file: " + path);
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace

void save_checkpoint(const TopicModel& model, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  write_dense_tsv(model.phi, dir + "/phi.tsv");
  write_dense_tsv(model.eta, dir + "/eta.tsv");

  {
    // sparse triplets; tiny mixture weights are dropped
    std::ofstream out(dir + "/theta.tsv");
    if (!out) throw std::runtime_error("cannot write theta.tsv");
    for (Eigen::Index d = 0; d < model.theta.rows(); ++d)
      for (Eigen::Index k = 0; k < model.theta.cols(); ++k)
        if (model.theta(d, k) >= 1e-6)
          out << d << '\t' << k << '\t' << fmt(model.theta(d, k)) << '\n';
  }
  {
    std::ofstream out(dir + "/alpha.tsv");
    for (double v : model.alpha) out << fmt(v) << '\n';
  }
  {
    std::ofstream out(dir + "/config.json");
    nlohmann::json j{{"n_topics", model.config.n_topics},
                     {"total_iters", model.config.total_iters},
                     {"burn_in", model.config.burn_in},
                     {"gamma_shape", model.config.gamma_shape},
                     {"gamma_scale", model.config.gamma_scale},
                     {"fixed_point_tol", model.config.fixed_point_tol},
                     {"rng_seed", model.config.rng_seed},
                     {"optimize_alpha", model.config.optimize_alpha},
                     {"optimize_eta", model.config.optimize_eta},
                     {"thin", model.config.thin},
                     {"n_threads", model.config.n_threads}};
    out << j.dump(2) << '\n';
  }
  {
    std::ofstream out(dir + "/seed.txt");
    out << model.config.rng_seed << '\n';
  }
  {
    std::ofstream out(dir + "/iters.txt");
    out << model.first_averaged_iter << '\t' << model.last_averaged_iter
        << '\n';
  }
}

TopicModel load_checkpoint(const std::string& dir) {
  TopicModel model;
  model.phi = read_dense_tsv(dir + "/phi.tsv");
  model.eta = read_dense_tsv(dir + "/eta.tsv");

  const int k_count = static_cast<int>(model.phi.rows());

  {
    std::ifstream in(dir + "/alpha.tsv");
    if (!in) throw std::runtime_error("cannot open alpha.tsv in " + dir);
    double v;
    while (in >> v) model.alpha.push_back(v);
    if (static_cast<int>(model.alpha.size()) != k_count)
      throw std::runtime_error("alpha.tsv length mismatch in " + dir);
  }
  {
    std::ifstream in(dir + "/theta.tsv");
    if (!in) throw std::runtime_error("cannot open theta.tsv in " + dir);
    std::vector<std::tuple<int, int, double>> trips;
    int d, k;
    double v;
    int d_max = -1;
    while (in >> d >> k >> v) {
      trips.emplace_back(d, k, v);
      d_max = std::max(d_max, d);
    }
    model.theta = Eigen::MatrixXd::Zero(d_max + 1, k_count);
    for (auto& [dd, kk, vv] : trips) model.theta(dd, kk) = vv;
  }
  {
    std::ifstream in(dir + "/config.json");
    if (in) {
      nlohmann::json j = nlohmann::json::parse(in);
      model.config.n_topics = j.value("n_topics", k_count);
      model.config.total_iters = j.value("total_iters", 0);
      model.config.burn_in = j.value("burn_in", 0);
      model.config.rng_seed = j.value("rng_seed", std::uint64_t{0});
    }
  }
  {
    std::ifstream in(dir + "/iters.txt");
    if (in) in >> model.first_averaged_iter >> model.last_averaged_iter;
  }
  return model;
}

}  // namespace taxtopics
