#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace storygraph::text {

class Stemmer {
 public:
  virtual ~Stemmer() = default;
  virtual std::string stem(std::string_view word) const = 0;
};

// The original Porter (1980) algorithm for lowercase English words.
class PorterStemmer final : public Stemmer {
 public:
  std::string stem(std::string_view word) const override;
};

class IdentityStemmer final : public Stemmer {
 public:
  std::string stem(std::string_view word) const override { return std::string(word); }
};

const Stemmer& porter();

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last byte

  bool operator==(const Span&) const = default;
};

// Lowercase stemmed terms plus the byte span each term came from.
struct TokenStream {
  std::vector<std::string> tokens;
  std::vector<Span> spans;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Lowercased words, no stemming. Punctuation other than intra-word
// apostrophes separates words.
TokenStream tokenize(std::string_view text);

// tokenize + stem. Stemming is iterated to a fixpoint so that normalizing
// the joined output again yields the same tokens.
TokenStream normalize(std::string_view text, const Stemmer& stemmer = porter());

std::string join(std::span<const std::string> tokens, std::string_view sep = " ");

class Stoplist {
 public:
  Stoplist() = default;
  explicit Stoplist(std::span<const std::string> words);

  static Stoplist english();
  // One term per line; blank lines and lines starting with '#' are skipped.
  static Stoplist load(const std::filesystem::path& path);
  static Stoplist parse(std::string_view contents);

  void add(std::string_view word);
  // True for a listed word in raw lowercase form or in its stemmed form.
  bool contains(std::string_view term) const;
  std::size_t size() const { return raw_.size(); }

 private:
  std::set<std::string, std::less<>> raw_;
  std::set<std::string, std::less<>> stems_;
};

TokenStream remove_stopwords(const TokenStream& ts, const Stoplist& stoplist);

// Sparse tf-idf weights; only strictly positive weights are stored.
using TermVector = std::map<std::string, double, std::less<>>;

// tf = count / doc length, idf = ln(N / df). Terms with idf 0 are dropped.
std::vector<TermVector> tfidf_vectors(std::span<const TokenStream> docs);
std::vector<TermVector> tfidf_vectors(std::span<const std::vector<std::string>> docs);

double cosine(const TermVector& a, const TermVector& b);

}  // namespace storygraph::text
