#include "storygraph/textkit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "storygraph/error.hpp"

namespace storygraph::text {
namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

// Length of a whitespace sequence starting at i (ASCII whitespace or U+00A0), 0 if none.
std::size_t whitespace_len(std::string_view s, std::size_t i) {
  auto c = static_cast<unsigned char>(s[i]);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
  if (c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xA0) return 2;
  return 0;
}

// Length of an apostrophe at i (' or U+2019), 0 if none.
std::size_t apostrophe_len(std::string_view s, std::size_t i) {
  if (s[i] == '\'') return 1;
  if (s.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

std::string stem_to_fixpoint(const Stemmer& stemmer, std::string word) {
  for (int i = 0; i < 16; ++i) {
    std::string next = stemmer.stem(word);
    if (next == word) break;
    word = std::move(next);
  }
  return word;
}

}  // namespace

TokenStream tokenize(std::string_view text) {
  TokenStream out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!is_word_byte(static_cast<unsigned char>(text[i])) || whitespace_len(text, i) > 0) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    std::string word;
    while (i < n) {
      auto c = static_cast<unsigned char>(text[i]);
      if (whitespace_len(text, i) > 0) break;
      if (is_word_byte(c)) {
        word.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
        ++i;
        continue;
      }
      std::size_t ap = apostrophe_len(text, i);
      if (ap > 0 && i + ap < n && is_word_byte(static_cast<unsigned char>(text[i + ap])) &&
          whitespace_len(text, i + ap) == 0) {
        word.push_back('\'');
        i += ap;
        continue;
      }
      break;
    }
    out.tokens.push_back(std::move(word));
    out.spans.push_back({begin, i});
  }
  return out;
}

TokenStream normalize(std::string_view text, const Stemmer& stemmer) {
  TokenStream ts = tokenize(text);
  for (auto& t : ts.tokens) t = stem_to_fixpoint(stemmer, std::move(t));
  return ts;
}

std::string join(std::span<const std::string> tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

Stoplist::Stoplist(std::span<const std::string> words) {
  for (const auto& w : words) add(w);
}

Stoplist Stoplist::english() {
  static const char* const kWords[] = {
#include "stopwords_en.inc"
  };
  Stoplist list;
  for (const char* w : kWords) list.add(w);
  return list;
}

Stoplist Stoplist::parse(std::string_view contents) {
  Stoplist list;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    list.add(std::string_view(line).substr(b, e - b + 1));
  }
  return list;
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open stopword list: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Stoplist::add(std::string_view word) {
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower.empty()) return;
  stems_.insert(stem_to_fixpoint(porter(), lower));
  raw_.insert(std::move(lower));
}

bool Stoplist::contains(std::string_view term) const {
  return raw_.find(term) != raw_.end() || stems_.find(term) != stems_.end();
}

TokenStream remove_stopwords(const TokenStream& ts, const Stoplist& stoplist) {
  TokenStream out;
  for (std::size_t i = 0; i < ts.tokens.size(); ++i) {
    if (stoplist.contains(ts.tokens[i])) continue;
    out.tokens.push_back(ts.tokens[i]);
    if (i < ts.spans.size()) out.spans.push_back(ts.spans[i]);
  }
  return out;
}

std::vector<TermVector> tfidf_vectors(std::span<const std::vector<std::string>> docs) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    for (auto t : seen) ++df[std::string(t)];
  }
  const double n_docs = static_cast<double>(docs.size());
  std::vector<TermVector> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) {
    TermVector v;
    if (!doc.empty()) {
      std::map<std::string_view, std::size_t> counts;
      for (const auto& t : doc) ++counts[t];
      const double len = static_cast<double>(doc.size());
      for (const auto& [term, count] : counts) {
        double idf = std::log(n_docs / static_cast<double>(df.at(std::string(term))));
        double w = (static_cast<double>(count) / len) * idf;
        if (w > 0.0) v.emplace(std::string(term), w);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<TermVector> tfidf_vectors(std::span<const TokenStream> docs) {
  std::vector<std::vector<std::string>> raw;
  raw.reserve(docs.size());
  for (const auto& d : docs) raw.push_back(d.tokens);
  return tfidf_vectors(std::span<const std::vector<std::string>>(raw));
}

double cosine(const TermVector& a, const TermVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : a) na += w * w;
  for (const auto& [t, w] : b) nb += w * w;
  const TermVector& small = a.size() <= b.size() ? a : b;
  const TermVector& large = a.size() <= b.size() ? b : a;
  for (const auto& [t, w] : small) {
    auto it = large.find(t);
    if (it != large.end()) dot += w * it->second;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace storygraph::text
