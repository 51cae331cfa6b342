#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "storygraph/aligner.hpp"
#include "storygraph/script.hpp"
#include "storygraph/textkit.hpp"

namespace storygraph::annotations {

struct BoundingBox {
  double x = 0, y = 0, w = 0, h = 0;
  bool operator==(const BoundingBox&) const = default;
};

struct FaceObservation {
  std::int64_t time_ms = 0;
  BoundingBox bbox;
  std::string identity;
};

struct CaptionObservation {
  std::int64_t time_ms = 0;
  BoundingBox bbox;
  std::string sentence;
  double confidence = 0.0;
};

struct EntityDictionary {
  std::map<std::string, std::string> characters;  // alias -> canonical, uppercase keys
  std::map<std::string, std::string> locations;
  std::set<std::string> keyword_blocklist;
  std::optional<std::set<std::string>> keyword_allowlist;

  // Resolves alias chains so every canonical name maps to itself. Throws
  // ValidationError on a cycle.
  void close_aliases();
  bool is_character(std::string_view name) const;
};

// JSON loaders. Records are validated and returned sorted by time_ms.
std::vector<FaceObservation> parse_faces(std::string_view json_text);
std::vector<CaptionObservation> parse_captions(std::string_view json_text);
EntityDictionary parse_entities(std::string_view json_text);

struct Annotations {
  std::vector<FaceObservation> faces;
  std::vector<CaptionObservation> captions;
};
// Either path may be empty, meaning "no observations of that kind".
Annotations load_annotations(const std::string& faces_path, const std::string& captions_path);

std::string canonicalize(std::string_view name, const std::map<std::string, std::string>& aliases);

struct KeywordOptions {
  std::size_t top_k = 10;
};

// Ranked keywords (stemmed terms) for every conversation of the corpus:
// tf-idf over conversations, stopwords and blocklisted terms removed,
// allowlist applied when present. Ties are ordered by term.
std::vector<std::vector<std::string>> extract_keywords(const std::vector<text::TokenStream>& conversations,
                                                       const EntityDictionary& dict,
                                                       const text::Stoplist& stoplist,
                                                       const KeywordOptions& options = {});

// Keywords of one conversation against the corpus it belongs to.
std::vector<std::string> extract_keywords(std::size_t conversation, const std::vector<text::TokenStream>& corpus,
                                          const EntityDictionary& dict, const text::Stoplist& stoplist,
                                          const KeywordOptions& options = {});

struct BundleConversation {
  std::set<std::string> participants;
  std::set<std::string> keywords;
  std::map<std::string, std::set<std::string>> speaker_keywords;  // keywords found in each speaker's lines
};

struct SceneBundle {
  std::size_t scene_index = 0;  // position in the timeline
  script::SceneKind kind = script::SceneKind::ScriptMatched;
  script::TimeBounds bounds;
  std::optional<std::string> location;
  std::set<std::string> characters;
  std::set<std::string> faces;
  std::vector<CaptionObservation> captions;
  std::set<std::string> keywords;
  std::vector<BundleConversation> conversations;
  std::set<std::string> kept_captions;  // caption node ids, filled by caption selection
};

struct BundleOptions {
  script::ConversationMode conversation_mode = script::ConversationMode::AdjacentRuns;
  KeywordOptions keywords;
  // Count description mentions of dictionary characters as presence.
  bool mention_presence = false;
};

struct BundleResult {
  std::vector<SceneBundle> bundles;
  std::size_t dropped_faces = 0;
  std::size_t dropped_captions = 0;
};

// Index of the timeline entry whose [start, end) contains t, if any.
std::optional<std::size_t> entry_containing(const align::Timeline& timeline, std::int64_t t);

BundleResult bundle_by_scene(const align::Timeline& timeline, const std::vector<script::Scene>& scenes,
                             const std::vector<FaceObservation>& faces,
                             const std::vector<CaptionObservation>& captions, const EntityDictionary& dict,
                             const text::Stoplist& stoplist, const BundleOptions& options = {});

}  // namespace storygraph::annotations
