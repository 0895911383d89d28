#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "taxtopics/quarter.hpp"
#include "taxtopics/text.hpp"

namespace taxtopics {

struct RawDocument {
  std::string id;
  Date date;
  std::string title;
  std::string text;
};

struct Paragraph {
  std::string parent_id;
  int index = 0;
  Date date;
  std::vector<std::string> tokens;
};

struct Vocabulary {
  std::vector<std::string> terms;            // ordered
  std::vector<std::uint32_t> doc_freq;       // aligned with terms
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return terms.size(); }
  std::optional<std::uint32_t> lookup(const std::string& term) const {
    auto it = index.find(term);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

struct BowDocument {
  std::string id;
  Date date;
  std::map<std::uint32_t, std::uint32_t> counts;  // term index -> count >= 1
  std::uint32_t n_tokens = 0;                     // sum of counts
};

struct BowCorpus {
  Vocabulary vocab;
  std::vector<BowDocument> docs;
};

std::vector<Paragraph> split_paragraphs(const RawDocument& doc);

// ordered by descending doc_freq, ties lexicographic; throws if nothing
// survives the threshold
Vocabulary build_vocabulary(
    const std::vector<std::vector<std::string>>& token_streams,
    std::uint32_t min_doc_freq);

std::map<std::uint32_t, std::uint32_t> vectorize(
    const std::vector<std::string>& tokens, const Vocabulary& vocab);

struct CorpusConfig {
  std::uint32_t min_doc_freq = 20;
  std::uint64_t min_pair_count = 20;
  double chi2_threshold = 10.83;  // p ~ 0.001 at 1 dof
  bool lemmatize = true;
};

struct CorpusBuildResult {
  BowCorpus corpus;
  std::vector<Paragraph> dropped;  // empty after filtering, kept for the log
  std::size_t n_bigrams = 0;
};

// full Appendix-style pipeline: split, tokenize, stopword+lemma, rare-word
// filter on unigrams, bigram detection + merge, rare-word filter again,
// vectorize. Deterministic for fixed inputs.
CorpusBuildResult build_corpus(const std::vector<RawDocument>& raw,
                               const StopwordSet& stopwords,
                               const Lemmatizer& lemmatizer,
                               const CorpusConfig& cfg);

// ---- file formats ----

// JSON Lines with fields {"id","date","title","text"}
std::vector<RawDocument> read_documents_jsonl(const std::string& path);

// term_id <TAB> term <TAB> doc_freq
void write_vocabulary_tsv(const Vocabulary& vocab, const std::string& path);
Vocabulary read_vocabulary_tsv(const std::string& path);

// triplets doc_id <TAB> term_id <TAB> count, plus doc_id <TAB> date <TAB>
// n_tokens metadata
void write_corpus_tsv(const BowCorpus& corpus, const std::string& triplet_path,
                      const std::string& meta_path);
BowCorpus read_corpus_tsv(const std::string& triplet_path,
                          const std::string& meta_path,
                          const std::string& vocab_path);

void write_dropped_log(const std::vector<Paragraph>& dropped,
                       const std::string& path);

}  // namespace taxtopics
