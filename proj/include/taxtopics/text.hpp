#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace taxtopics {

// paragraphs are separated by one or more blank lines; single newlines do
// not split
std::vector<std::string> split_paragraph_texts(const std::string& text);

// lowercase tokens split along non-alphanumeric characters (non-ASCII bytes
// act as separators)
std::vector<std::string> tokenize(const std::string& text);

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(const std::string& token) const = 0;
};

// no-op, for configs that switch lemmatization off
class IdentityLemmatizer : public Lemmatizer {
 public:
  std::string lemma(const std::string& token) const override { return token; }
};

// English suffix stripper: plural -s/-es/-ies and verbal -ed/-ing with an
// exception table. Linguistic completeness is out of scope; the rules only
// need to fold common inflections onto one stem.
class RuleLemmatizer : public Lemmatizer {
 public:
  RuleLemmatizer();
  std::string lemma(const std::string& token) const override;

 private:
  std::unordered_set<std::string> keep_;           // never touched
  std::unordered_map<std::string, std::string> irregular_;
};

using StopwordSet = std::unordered_set<std::string>;

// drops stopwords, lemmatizes survivors, re-checks the lemma against the
// stopword set
std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   const StopwordSet& stopwords,
                                   const Lemmatizer& lemmatizer);

// 2x2 Pearson chi-square from pair counts: a = (x,y), b = x without y,
// c = y without x, d = neither
double chi2_pair_score(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d);

struct BigramCounts {
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair;
  std::unordered_map<std::string, std::uint64_t> first;   // occurrences as left element
  std::unordered_map<std::string, std::uint64_t> second;  // occurrences as right element
  std::uint64_t total = 0;                                // all consecutive pairs

  void absorb(const std::vector<std::string>& tokens);
  void merge(const BigramCounts& other);
};

inline const char kBigramJoiner = '_';

// consecutive pairs with count >= min_pair_count and chi2 > threshold,
// returned as joined terms
std::unordered_set<std::string> detect_bigrams(const BigramCounts& counts,
                                               std::uint64_t min_pair_count,
                                               double chi2_threshold);

// single greedy left-to-right pass; a merged pair is consumed
std::vector<std::string> merge_bigrams(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& bigrams);

// one term per line, '#' starts a comment, blank lines ignored
std::unordered_set<std::string> load_term_set(const std::string& path);

}  // namespace taxtopics
