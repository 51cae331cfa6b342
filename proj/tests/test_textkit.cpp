#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "storygraph/error.hpp"
#include "storygraph/textkit.hpp"

using namespace storygraph;
using namespace storygraph::text;

TEST_SUITE("textkit") {
  TEST_CASE("porter agrees with the reference table") {
    std::istringstream in(read_fixture("porter_oracle.tsv"));
    std::string line;
    std::size_t checked = 0, wrong = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      const auto word = line.substr(0, tab), expect = line.substr(tab + 1);
      const auto got = porter().stem(word);
      if (got != expect) {
        ++wrong;
        MESSAGE(word << " -> " << got << " (expected " << expect << ")");
      }
      ++checked;
    }
    CHECK(checked > 900);
    CHECK(wrong == 0);
  }

  TEST_CASE("porter classic cases") {
    CHECK(porter().stem("caresses") == "caress");
    CHECK(porter().stem("ponies") == "poni");
    CHECK(porter().stem("relational") == "relat");
    CHECK(porter().stem("generalizations") == "gener");
    CHECK(porter().stem("is") == "is");
    CHECK(porter().stem("a") == "a");
  }

  TEST_CASE("tokenize lowercases and splits on punctuation") {
    auto ts = tokenize("Hello, WORLD! don't-stop");
    CHECK(ts.tokens == std::vector<std::string>{"hello", "world", "don't", "stop"});
    REQUIRE(ts.spans.size() == 4);
    CHECK(ts.spans[0] == Span{0, 5});
    CHECK(tokenize("").empty());
    CHECK(tokenize("  ,,, ").empty());
  }

  TEST_CASE("normalize stems") {
    auto ts = normalize("The runners were running quickly");
    CHECK(ts.tokens == std::vector<std::string>{"the", "runner", "were", "run", "quickli"});
  }

  TEST_CASE("normalize is idempotent on random text") {
    std::mt19937 rng(11);
    const std::vector<std::string> vocab = {"generalizations", "operators", "hopefulness", "conditional", "agreed",
                                            "running", "the", "sensibilities", "adjustable", "formalize",
                                            "electrical", "oscillators", "ponies", "dancing", "relational"};
    for (int trial = 0; trial < 200; ++trial) {
      std::string s;
      for (int k = 0; k < 8; ++k) s += vocab[rng() % vocab.size()] + " ";
      auto once = normalize(s);
      auto twice = normalize(join(once.tokens));
      CHECK(once.tokens == twice.tokens);
    }
  }

  TEST_CASE("stoplist") {
    auto en = Stoplist::english();
    CHECK(en.size() == 179);
    CHECK(en.contains("the"));
    CHECK(en.contains("was"));
    CHECK(en.contains("wa"));  // stemmed form of "was"
    CHECK_FALSE(en.contains("lantern"));
    auto custom = Stoplist::parse("# comment\nfoo\n\nBar\n");
    CHECK(custom.size() == 2);
    CHECK(custom.contains("bar"));
    CHECK_THROWS_AS(Stoplist::load("/nonexistent/stop.txt"), ConfigError);
    auto ts = remove_stopwords(normalize("the lantern is in the water"), en);
    CHECK(ts.tokens == std::vector<std::string>{"lantern", "water"});
  }

  TEST_CASE("tf-idf and cosine") {
    std::vector<std::vector<std::string>> docs = {{"a", "b", "b"}, {"a", "c"}, {"c", "d"}};
    auto v = tfidf_vectors(std::span<const std::vector<std::string>>(docs));
    REQUIRE(v.size() == 3);
    CHECK(v[0].count("a") == 1);
    CHECK(v[0].at("b") == doctest::Approx(2.0 / 3.0 * std::log(3.0)));
    CHECK(v[0].at("a") == doctest::Approx(1.0 / 3.0 * std::log(1.5)));
    CHECK(cosine(v[0], v[0]) == doctest::Approx(1.0));
    CHECK(cosine(v[0], v[2]) == 0.0);
    CHECK(cosine({}, v[1]) == 0.0);
    // term present in every document has zero weight and is dropped
    std::vector<std::vector<std::string>> same = {{"x", "y"}, {"x"}};
    auto w = tfidf_vectors(std::span<const std::vector<std::string>>(same));
    CHECK(w[0].count("x") == 0);
    CHECK(w[1].empty());
  }

  TEST_CASE("cosine stays within [0, 1]") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<std::vector<std::string>> docs(4);
      for (auto& d : docs)
        for (int k = 0; k < 6; ++k) d.push_back(std::string(1, static_cast<char>('a' + rng() % 6)));
      auto v = tfidf_vectors(std::span<const std::vector<std::string>>(docs));
      for (auto& a : v)
        for (auto& b : v) {
          double c = cosine(a, b);
          CHECK(c >= 0.0);
          CHECK(c <= 1.0);
        }
    }
  }
}
