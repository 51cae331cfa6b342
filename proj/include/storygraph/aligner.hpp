#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "storygraph/script.hpp"
#include "storygraph/subtitles.hpp"
#include "storygraph/textkit.hpp"

namespace storygraph::align {

enum class MatchMethod { Exact, Inclusion, Cosine };

struct UtteranceMatch {
  std::size_t scene_index = 0;
  std::size_t utterance_index = 0;
  // Positions into the subtitle list (0-based), ascending and contiguous.
  std::vector<std::size_t> subtitle_positions;
  MatchMethod method = MatchMethod::Exact;
  double score = 1.0;
};

struct ShotList {
  std::vector<std::int64_t> boundaries_ms;  // strictly increasing, first >= 0

  // Throws ValidationError when the invariant does not hold.
  void validate() const;
};

struct AlignOptions {
  double cosine_threshold = 0.3;
  std::size_t max_blocks_per_utterance = 5;
  // Shorter side of an inclusion match must have at least this many tokens.
  std::size_t min_inclusion_tokens = 2;
  std::optional<std::int64_t> movie_end_ms;  // defaults to the last subtitle end
};

// One utterance or subtitle block after normalization. Utterances are keyed
// by (scene, utterance); blocks by their position in the subtitle list.
struct AlignUnit {
  std::size_t scene_index = 0;
  std::size_t utterance_index = 0;
  std::vector<std::string> tokens;   // normalized
  std::vector<std::string> content;  // normalized, stopwords removed
};

// Utterances in script order.
std::vector<AlignUnit> utterance_units(const std::vector<script::Scene>& scenes,
                                       const text::Stoplist& stoplist);
std::vector<AlignUnit> subtitle_units(const std::vector<subtitles::SubtitleBlock>& blocks,
                                      const text::Stoplist& stoplist);

// Match state threaded through the passes: per-utterance match slot and
// per-block usage.
struct MatchState {
  std::vector<std::optional<UtteranceMatch>> by_utterance;
  std::vector<bool> block_used;

  MatchState(std::size_t utterances, std::size_t blocks)
      : by_utterance(utterances), block_used(blocks, false) {}
  std::vector<UtteranceMatch> matches() const;
  // Open interval (lo, hi) of block positions available to utterance u given
  // its nearest matched predecessor/successor. lo may be -1, hi may be n.
  std::pair<std::ptrdiff_t, std::ptrdiff_t> window(std::size_t u) const;
};

// Pass 1: identical token sequences; maximum order-preserving matching.
void match_exact(const std::vector<AlignUnit>& utterances, const std::vector<AlignUnit>& blocks,
                 MatchState& state);

// Pass 2: contiguous token inclusion in either direction, within windows.
void match_inclusion(const std::vector<AlignUnit>& utterances, const std::vector<AlignUnit>& blocks,
                     MatchState& state, const AlignOptions& options = {});

// Pass 3: best tf-idf cosine within the window if >= threshold.
void match_cosine(const std::vector<AlignUnit>& utterances, const std::vector<AlignUnit>& blocks,
                  MatchState& state, const AlignOptions& options = {});

// Raw [min start, max end] of the matched blocks, start snapped down and end
// snapped up to shot boundaries.
script::TimeBounds infer_scene_bounds(const std::vector<UtteranceMatch>& scene_matches,
                                      const std::vector<subtitles::SubtitleBlock>& blocks,
                                      const ShotList& shots);

struct TimelineEntry {
  script::SceneKind kind = script::SceneKind::ScriptMatched;
  std::vector<std::size_t> scene_indices;  // script scenes covered (several for meta)
  script::TimeBounds bounds;
  std::size_t empty_scenes = 0;  // covered script scenes without dialogue

  std::string label() const;  // "Scene 3", "Meta Scene 2-4" (1-based)
};

struct AlignmentStats {
  std::size_t matched = 0;
  std::size_t boundary_retrieved = 0;
  std::size_t boundary_empty = 0;
  std::size_t meta = 0;
  std::size_t meta_empty = 0;
  std::size_t total = 0;
  std::size_t total_empty = 0;

  bool operator==(const AlignmentStats&) const = default;
};

struct Timeline {
  std::vector<TimelineEntry> entries;
  std::vector<UtteranceMatch> matches;
  AlignmentStats stats;
  std::int64_t movie_end_ms = 0;
};

// Given bounds for matched scenes (nullopt elsewhere), emits the timeline:
// lone gaps become boundary-retrieved scenes, longer gaps and the unmatched
// head/tail become meta scenes. Throws AlignmentError when nothing matched.
Timeline fill_gaps(const std::vector<script::Scene>& scenes,
                   const std::vector<std::optional<script::TimeBounds>>& matched_bounds,
                   std::int64_t movie_end_ms);

AlignmentStats compute_stats(const std::vector<TimelineEntry>& entries);

// Table-shaped text report: matched | boundary (empty) | meta (empty) | total (empty).
std::string alignment_report(const Timeline& timeline, const std::string& episode = "movie");

Timeline align(const std::vector<script::Scene>& scenes,
               const std::vector<subtitles::SubtitleBlock>& blocks, const ShotList& shots = {},
               const AlignOptions& options = {}, const text::Stoplist& stoplist = text::Stoplist::english());

std::string_view to_string(MatchMethod m);
MatchMethod match_method_from_string(std::string_view s);

}  // namespace storygraph::align
