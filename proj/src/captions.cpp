#include "storygraph/captions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "storygraph/error.hpp"

namespace storygraph::captions {
namespace {

std::string lower_sentence(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::set<CaptionTerm> caption_terms(std::string_view sentence, const text::Stoplist& stoplist) {
  const auto words = text::tokenize(sentence).tokens;
  std::set<CaptionTerm> out;
  if (words.size() < kGramSize) return out;
  for (std::size_t i = 0; i + kGramSize <= words.size(); ++i) {
    std::size_t stops = 0;
    for (std::size_t k = 0; k < kGramSize; ++k) stops += stoplist.contains(words[i + k]) ? 1 : 0;
    if (stops > 1) continue;
    CaptionTerm term;
    term.bag.assign(words.begin() + static_cast<std::ptrdiff_t>(i),
                    words.begin() + static_cast<std::ptrdiff_t>(i + kGramSize));
    std::sort(term.bag.begin(), term.bag.end());
    term.bag.erase(std::unique(term.bag.begin(), term.bag.end()), term.bag.end());
    term.display = text::join(term.bag, ",");
    out.insert(std::move(term));
  }
  return out;
}

double caption_tf(std::string_view caption, const SceneFrames& scene) {
  double num = 0.0, den = 0.0;
  for (const auto& fr : scene) {
    for (const auto& [ca, w] : fr.captions) {
      den += w;
      if (ca == caption) num += w;
    }
  }
  if (den <= 0.0) throw ValidationError("caption_tf: scene has zero total caption confidence");
  return num / den;
}

double caption_idf(std::string_view caption, std::span<const SceneFrames> scenes) {
  std::size_t df = 0;
  for (const auto& s : scenes) {
    bool found = std::any_of(s.begin(), s.end(), [&](const Frame& fr) {
      return std::any_of(fr.captions.begin(), fr.captions.end(), [&](const auto& c) { return c.first == caption; });
    });
    df += found ? 1 : 0;
  }
  if (df == 0) throw ValidationError("caption_idf: caption '" + std::string(caption) + "' occurs in no scene");
  return std::log(static_cast<double>(scenes.size()) / static_cast<double>(df));
}

std::vector<std::vector<SceneCaptionScore>> score_scenes(std::span<const SceneFrames> scenes) {
  // Per-scene weight sums, then document frequency across scenes.
  std::vector<std::map<std::string, double>> weights(scenes.size());
  std::vector<double> totals(scenes.size(), 0.0);
  std::map<std::string, std::size_t> df;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    for (const auto& fr : scenes[s]) {
      for (const auto& [ca, w] : fr.captions) {
        weights[s][ca] += w;
        totals[s] += w;
      }
    }
    for (const auto& [ca, w] : weights[s]) ++df[ca];
  }
  const double n = static_cast<double>(scenes.size());
  std::vector<std::vector<SceneCaptionScore>> out(scenes.size());
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    if (weights[s].empty()) continue;
    if (totals[s] <= 0.0)
      throw ValidationError("scene " + std::to_string(s) + " has zero total caption confidence");
    for (const auto& [ca, w] : weights[s]) {
      SceneCaptionScore sc;
      sc.scene_index = s;
      sc.caption = ca;
      sc.tf = w / totals[s];
      sc.idf = std::log(n / static_cast<double>(df[ca]));
      sc.tfidf = sc.tf * sc.idf;
      out[s].push_back(std::move(sc));
    }
  }
  return out;
}

std::vector<SceneCaptionScore> top_captions(std::vector<SceneCaptionScore> scores, std::size_t k) {
  if (k == 0) throw ValidationError("top_captions: k must be at least 1");
  std::sort(scores.begin(), scores.end(), [](const SceneCaptionScore& a, const SceneCaptionScore& b) {
    if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
    if (a.tf != b.tf) return a.tf > b.tf;
    return a.caption < b.caption;
  });
  if (scores.size() > k) scores.resize(k);
  return scores;
}

SceneFrames frames_for(const std::vector<annotations::CaptionObservation>& observations,
                       const text::Stoplist& stoplist, CaptionIdentity identity) {
  std::map<std::int64_t, std::map<std::string, double>> by_time;
  for (const auto& obs : observations) {
    auto& frame = by_time[obs.time_ms];
    if (identity == CaptionIdentity::RawSentence) {
      std::string s = lower_sentence(obs.sentence);
      if (!s.empty()) frame[s] += obs.confidence;
    } else {
      for (const auto& term : caption_terms(obs.sentence, stoplist)) frame[term.display] += obs.confidence;
    }
  }
  SceneFrames frames;
  for (auto& [t, caps] : by_time) {
    if (caps.empty()) continue;
    Frame fr;
    fr.time_ms = t;
    fr.captions.assign(caps.begin(), caps.end());
    frames.push_back(std::move(fr));
  }
  return frames;
}

void select_captions(std::vector<annotations::SceneBundle>& bundles, const text::Stoplist& stoplist,
                     const CaptionOptions& options) {
  std::vector<SceneFrames> scenes;
  scenes.reserve(bundles.size());
  for (const auto& b : bundles) scenes.push_back(frames_for(b.captions, stoplist, options.identity));
  auto scores = score_scenes(scenes);
  for (std::size_t s = 0; s < bundles.size(); ++s) {
    auto& kept = bundles[s].kept_captions;
    kept.clear();
    for (const auto& sc : top_captions(std::move(scores[s]), options.top_k)) {
      if (options.identity == CaptionIdentity::SortedBag) {
        kept.insert(sc.caption);
      } else {
        for (const auto& term : caption_terms(sc.caption, stoplist)) kept.insert(term.display);
      }
    }
  }
}

}  // namespace storygraph::captions
