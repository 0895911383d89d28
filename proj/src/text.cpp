#include "taxtopics/text.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace taxtopics {

std::vector<std::string> split_paragraph_texts(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  lines.push_back(cur);

  auto is_blank = [](const std::string& l) {
    for (char ch : l)
      if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
  };

  std::vector<std::string> paras;
  std::string para;
  for (const auto& line : lines) {
    if (is_blank(line)) {
      if (!para.empty()) paras.push_back(para);
      para.clear();
    } else {
      if (!para.empty()) para.push_back('\n');
      para += line;
    }
  }
  if (!para.empty()) paras.push_back(para);
  return paras;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char ch : text) {
    if (ch < 0x80 && std::isalnum(ch)) {
      cur.push_back(static_cast<char>(std::tolower(ch)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

RuleLemmatizer::RuleLemmatizer() {
  // words that look inflected but are not
  keep_ = {"this",  "his",    "its",   "us",     "is",    "was",   "has",
           "as",    "less",   "news",  "series", "species", "analysis",
           "basis", "crisis", "gas",   "bus",    "plus",  "yes",   "congress",
           "business", "always", "perhaps", "during", "nothing", "something",
           "anything", "everything", "thing", "bring", "being", "king",
           "morning", "evening", "spring", "wing",
           "sing",  "need",   "indeed", "exceed", "proceed", "feed", "speed",
           "red",   "hundred", "sacred", "bed",   "shed"};
  irregular_ = {{"men", "man"},         {"women", "woman"},
                {"children", "child"},  {"people", "person"},
                {"taxes", "tax"},       {"does", "do"},
                {"goes", "go"},         {"went", "go"},
                {"said", "say"},        {"made", "make"},
                {"lives", "life"},      {"leaves", "leave"}};
}

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// consonant-vowel-consonant ending suggests a dropped silent e ("mak" ->
// "make"); w/x/y finals never take one
bool wants_final_e(const std::string& s) {
  const std::size_t n = s.size();
  if (n < 2) return false;
  char c2 = s[n - 1];
  char c1 = s[n - 2];
  if (is_vowel(c2) || c2 == 'w' || c2 == 'x' || c2 == 'y') return false;
  if (!is_vowel(c1)) return false;
  if (n == 2) return true;
  return !is_vowel(s[n - 3]);
}

std::string strip_ed_ing(const std::string& w, std::size_t suffix_len) {
  std::string stem = w.substr(0, w.size() - suffix_len);
  const std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();  // planned -> plan
  } else if (wants_final_e(stem)) {
    stem.push_back('e');  // making -> make
  }
  return stem;
}

}  // namespace

std::string RuleLemmatizer::lemma(const std::string& token) const {
  if (token.size() <= 3) return token;
  if (keep_.count(token)) return token;
  if (auto it = irregular_.find(token); it != irregular_.end())
    return it->second;

  const std::size_t n = token.size();
  auto ends = [&](const char* suf) {
    std::size_t m = std::char_traits<char>::length(suf);
    return n >= m && token.compare(n - m, m, suf) == 0;
  };

  if (ends("ies") && n > 4) return token.substr(0, n - 3) + "y";   // cities -> city
  if (ends("sses")) return token.substr(0, n - 2);                 // classes -> class
  if (ends("xes") || ends("zes") || ends("ches") || ends("shes"))
    return token.substr(0, n - 2);                                 // boxes -> box
  if (ends("ed") && n > 4) return strip_ed_ing(token, 2);
  if (ends("ing") && n > 5) return strip_ed_ing(token, 3);
  if (ends("ss") || ends("us") || ends("is")) return token;
  if (ends("s")) return token.substr(0, n - 1);                    // cuts -> cut
  return token;
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   const StopwordSet& stopwords,
                                   const Lemmatizer& lemmatizer) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (stopwords.count(t)) continue;
    std::string lem = lemmatizer.lemma(t);
    if (lem.empty() || stopwords.count(lem)) continue;
    out.push_back(std::move(lem));
  }
  return out;
}

double chi2_pair_score(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d) {
  const double n = static_cast<double>(a + b + c + d);
  const double r1 = static_cast<double>(a + b);
  const double r2 = static_cast<double>(c + d);
  const double c1 = static_cast<double>(a + c);
  const double c2 = static_cast<double>(b + d);
  const double denom = r1 * r2 * c1 * c2;
  if (denom == 0.0) return 0.0;
  const double det =
      static_cast<double>(a) * static_cast<double>(d) -
      static_cast<double>(b) * static_cast<double>(c);
  return n * det * det / denom;
}

void BigramCounts::absorb(const std::vector<std::string>& tokens) {
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    ++pair[{tokens[i], tokens[i + 1]}];
    ++first[tokens[i]];
    ++second[tokens[i + 1]];
    ++total;
  }
}

void BigramCounts::merge(const BigramCounts& other) {
  for (const auto& [k, v] : other.pair) pair[k] += v;
  for (const auto& [k, v] : other.first) first[k] += v;
  for (const auto& [k, v] : other.second) second[k] += v;
  total += other.total;
}

std::unordered_set<std::string> detect_bigrams(const BigramCounts& counts,
                                               std::uint64_t min_pair_count,
                                               double chi2_threshold) {
  if (min_pair_count < 1)
    throw std::invalid_argument("detect_bigrams: min_pair_count must be >= 1");
  std::unordered_set<std::string> out;
  for (const auto& [key, a] : counts.pair) {
    if (a < min_pair_count) continue;
    const std::uint64_t b = counts.first.at(key.first) - a;
    const std::uint64_t c = counts.second.at(key.second) - a;
    const std::uint64_t d = counts.total - a - b - c;
    if (chi2_pair_score(a, b, c, d) > chi2_threshold)
      out.insert(key.first + kBigramJoiner + key.second);
  }
  return out;
}

std::vector<std::string> merge_bigrams(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& bigrams) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (i + 1 < tokens.size()) {
      std::string joined = tokens[i] + kBigramJoiner + tokens[i + 1];
      if (bigrams.count(joined)) {
        out.push_back(std::move(joined));
        i += 2;
        continue;
      }
    }
    out.push_back(tokens[i]);
    ++i;
  }
  return out;
}

std::unordered_set<std::string> load_term_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open term file: " + path);
  std::unordered_set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace taxtopics
