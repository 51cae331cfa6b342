#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "storygraph/annotations.hpp"
#include "storygraph/textkit.hpp"

namespace storygraph::captions {

// Sorted bag of the unique words of one caption 4-gram.
struct CaptionTerm {
  std::vector<std::string> bag;
  std::string display;  // bag joined with ","

  auto operator<=>(const CaptionTerm& o) const { return display <=> o.display; }
  bool operator==(const CaptionTerm& o) const { return display == o.display; }
};

inline constexpr std::size_t kGramSize = 4;
inline constexpr std::size_t kDefaultTopK = 40;

std::set<CaptionTerm> caption_terms(std::string_view sentence, const text::Stoplist& stoplist);

// One keyframe: caption identities with their confidence in that frame.
struct Frame {
  std::int64_t time_ms = 0;
  std::vector<std::pair<std::string, double>> captions;
};
using SceneFrames = std::vector<Frame>;

// Confidence-weighted frequency of `caption` in a scene. Throws
// ValidationError when the scene carries no confidence at all.
double caption_tf(std::string_view caption, const SceneFrames& scene);

// ln(|S| / #scenes containing caption). Throws ValidationError when no scene
// contains it.
double caption_idf(std::string_view caption, std::span<const SceneFrames> scenes);

struct SceneCaptionScore {
  std::size_t scene_index = 0;
  std::string caption;
  double tf = 0.0;
  double idf = 0.0;
  double tfidf = 0.0;
};

// Scores every distinct caption of every scene (scenes without captions
// produce no scores).
std::vector<std::vector<SceneCaptionScore>> score_scenes(std::span<const SceneFrames> scenes);

// Top k by tfidf, then tf, then caption text.
std::vector<SceneCaptionScore> top_captions(std::vector<SceneCaptionScore> scores, std::size_t k = kDefaultTopK);

enum class CaptionIdentity {
  SortedBag,    // score 4-gram bags; kept bags become caption nodes
  RawSentence,  // score lowercase sentences; kept sentences are reduced to bags
};

struct CaptionOptions {
  std::size_t top_k = kDefaultTopK;
  CaptionIdentity identity = CaptionIdentity::SortedBag;
};

// Groups a scene's observations into frames keyed by time_ms, mapping each
// observation to its identities (bags or sentence).
SceneFrames frames_for(const std::vector<annotations::CaptionObservation>& observations,
                       const text::Stoplist& stoplist, CaptionIdentity identity);

// Fills SceneBundle::kept_captions for every bundle.
void select_captions(std::vector<annotations::SceneBundle>& bundles, const text::Stoplist& stoplist,
                     const CaptionOptions& options = {});

}  // namespace storygraph::captions
