#include "taxtopics/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace taxtopics {

std::vector<Paragraph> split_paragraphs(const RawDocument& doc) {
  std::vector<Paragraph> out;
  int idx = 0;
  for (auto& text : split_paragraph_texts(doc.text)) {
    Paragraph p;
    p.parent_id = doc.id;
    p.index = idx++;
    p.date = doc.date;
    p.tokens = tokenize(text);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

// document frequencies over token streams
std::unordered_map<std::string, std::uint32_t> doc_freqs(
    const std::vector<std::vector<std::string>>& streams) {
  std::unordered_map<std::string, std::uint32_t> df;
  std::unordered_map<std::string, bool> seen;
  for (const auto& s : streams) {
    seen.clear();
    for (const auto& t : s) seen.emplace(t, true);
    for (const auto& [t, _] : seen) ++df[t];
  }
  return df;
}

}  // namespace

Vocabulary build_vocabulary(
    const std::vector<std::vector<std::string>>& token_streams,
    std::uint32_t min_doc_freq) {
  auto df = doc_freqs(token_streams);

  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (const auto& [t, n] : df)
    if (n >= min_doc_freq) kept.emplace_back(t, n);
  if (kept.empty()) throw std::runtime_error("empty vocabulary");

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.terms.reserve(kept.size());
  v.doc_freq.reserve(kept.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    v.index.emplace(kept[i].first, i);
    v.terms.push_back(std::move(kept[i].first));
    v.doc_freq.push_back(kept[i].second);
  }
  return v;
}

std::map<std::uint32_t, std::uint32_t> vectorize(
    const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::map<std::uint32_t, std::uint32_t> counts;
  for (const auto& t : tokens)
    if (auto id = vocab.lookup(t)) ++counts[*id];
  return counts;
}

CorpusBuildResult build_corpus(const std::vector<RawDocument>& raw,
                               const StopwordSet& stopwords,
                               const Lemmatizer& lemmatizer,
                               const CorpusConfig& cfg) {
  // uniqueness is an input invariant; check it up front
  {
    std::unordered_map<std::string, bool> ids;
    for (const auto& d : raw) {
      if (d.id.empty()) throw std::runtime_error("document with empty id");
      if (!ids.emplace(d.id, true).second)
        throw std::runtime_error("duplicate document id: " + d.id);
    }
  }

  std::vector<Paragraph> paras;
  for (const auto& d : raw)
    for (auto& p : split_paragraphs(d)) paras.push_back(std::move(p));

  const std::size_t n = paras.size();
  std::vector<std::vector<std::string>> streams(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
    streams[i] = normalize(paras[i].tokens, stopwords, lemmatizer);

  // rare unigrams go before bigram detection
  {
    auto df = doc_freqs(streams);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      auto& s = streams[i];
      std::erase_if(s, [&](const std::string& t) {
        return df.at(t) < cfg.min_doc_freq;
      });
    }
  }

  // associative reduction over documents
  BigramCounts counts;
#ifdef _OPENMP
#pragma omp parallel
  {
    BigramCounts local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
      local.absorb(streams[i]);
#pragma omp critical(bigram_merge)
    counts.merge(local);
  }
#else
  for (const auto& s : streams) counts.absorb(s);
#endif

  auto bigrams = detect_bigrams(counts, cfg.min_pair_count, cfg.chi2_threshold);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
    streams[i] = merge_bigrams(streams[i], bigrams);

  // second rare-word pass: merged bigram terms must meet the bound too
  {
    auto df = doc_freqs(streams);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      auto& s = streams[i];
      std::erase_if(s, [&](const std::string& t) {
        return df.at(t) < cfg.min_doc_freq;
      });
    }
  }

  CorpusBuildResult res;
  res.n_bigrams = bigrams.size();
  res.corpus.vocab = build_vocabulary(streams, cfg.min_doc_freq);

  for (std::size_t i = 0; i < n; ++i) {
    auto counts_i = vectorize(streams[i], res.corpus.vocab);
    if (counts_i.empty()) {
      res.dropped.push_back(paras[i]);
      continue;
    }
    BowDocument d;
    d.id = paras[i].parent_id + "#" + std::to_string(paras[i].index);
    d.date = paras[i].date;
    d.n_tokens = 0;
    for (const auto& [_, c] : counts_i) d.n_tokens += c;
    d.counts = std::move(counts_i);
    res.corpus.docs.push_back(std::move(d));
  }
  return res;
}

// ---- file formats ----

std::vector<RawDocument> read_documents_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open documents file: " + path);
  std::vector<RawDocument> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad JSON: " + e.what());
    }
    RawDocument d;
    d.id = j.at("id").get<std::string>();
    d.date = parse_date(j.at("date").get<std::string>());
    d.title = j.value("title", "");
    d.text = j.at("text").get<std::string>();
    out.push_back(std::move(d));
  }
  return out;
}

void write_vocabulary_tsv(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < vocab.size(); ++i)
    out << i << '\t' << vocab.terms[i] << '\t' << vocab.doc_freq[i] << '\n';
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t to_u64(const std::string& s, const std::string& ctx) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("bad integer '" + s + "' in " + ctx);
  return v;
}

}  // namespace

Vocabulary read_vocabulary_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != 3) throw std::runtime_error("bad vocabulary row: " + line);
    auto id = to_u64(f[0], path);
    if (id != v.terms.size())
      throw std::runtime_error("non-contiguous term ids in " + path);
    v.index.emplace(f[1], static_cast<std::uint32_t>(id));
    v.terms.push_back(f[1]);
    v.doc_freq.push_back(static_cast<std::uint32_t>(to_u64(f[2], path)));
  }
  return v;
}

void write_corpus_tsv(const BowCorpus& corpus, const std::string& triplet_path,
                      const std::string& meta_path) {
  std::ofstream trip(triplet_path);
  if (!trip) throw std::runtime_error("cannot write " + triplet_path);
  std::ofstream meta(meta_path);
  if (!meta) throw std::runtime_error("cannot write " + meta_path);
  for (const auto& d : corpus.docs) {
    for (const auto& [term, count] : d.counts)
      trip << d.id << '\t' << term << '\t' << count << '\n';
    meta << d.id << '\t' << to_string(d.date) << '\t' << d.n_tokens << '\n';
  }
}

BowCorpus read_corpus_tsv(const std::string& triplet_path,
                          const std::string& meta_path,
                          const std::string& vocab_path) {
  BowCorpus corpus;
  corpus.vocab = read_vocabulary_tsv(vocab_path);

  std::unordered_map<std::string, std::size_t> pos;
  {
    std::ifstream meta(meta_path);
    if (!meta) throw std::runtime_error("cannot open " + meta_path);
    std::string line;
    while (std::getline(meta, line)) {
      if (line.empty()) continue;
      auto f = split_tabs(line);
      if (f.size() != 3) throw std::runtime_error("bad meta row: " + line);
      BowDocument d;
      d.id = f[0];
      d.date = parse_date(f[1]);
      pos.emplace(d.id, corpus.docs.size());
      corpus.docs.push_back(std::move(d));
    }
  }
  {
    std::ifstream trip(triplet_path);
    if (!trip) throw std::runtime_error("cannot open " + triplet_path);
    std::string line;
    while (std::getline(trip, line)) {
      if (line.empty()) continue;
      auto f = split_tabs(line);
      if (f.size() != 3) throw std::runtime_error("bad corpus row: " + line);
      auto it = pos.find(f[0]);
      if (it == pos.end())
        throw std::runtime_error("corpus row for unknown doc: " + f[0]);
      auto term = static_cast<std::uint32_t>(to_u64(f[1], triplet_path));
      auto count = static_cast<std::uint32_t>(to_u64(f[2], triplet_path));
      if (term >= corpus.vocab.size())
        throw std::runtime_error("term id out of range: " + f[1]);
      if (count < 1) throw std::runtime_error("zero count in " + triplet_path);
      auto& d = corpus.docs[it->second];
      d.counts[term] += count;
      d.n_tokens += count;
    }
  }
  std::erase_if(corpus.docs,
                [](const BowDocument& d) { return d.counts.empty(); });
  return corpus;
}

void write_dropped_log(const std::vector<Paragraph>& dropped,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& p : dropped)
    out << p.parent_id << '#' << p.index << '\t' << to_string(p.date) << '\n';
}

}  // namespace taxtopics
