#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace storygraph::script {

enum class Setting { Interior, Exterior, Unknown };

struct SceneHeading {
  Setting setting = Setting::Unknown;
  std::string location;
  std::optional<std::string> time_of_day;
  std::string raw;
};

struct Utterance {
  std::string speaker;  // uppercase, cue qualifiers removed
  std::string text;     // dialogue lines joined by single spaces
  std::size_t index_in_scene = 0;
  std::string cue;         // the cue line as written
  std::string directions;  // parentheticals removed from the dialogue
  bool after_description = false;  // a description line precedes it within the scene
};

enum class SceneKind { ScriptMatched, BoundaryRetrieved, Meta };

struct TimeBounds {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  bool operator==(const TimeBounds&) const = default;
};

struct Scene {
  std::size_t index = 0;
  SceneHeading heading;
  std::string description;
  std::vector<Utterance> utterances;
  std::set<std::string> emphasized_terms;
  std::optional<TimeBounds> time_bounds;
  SceneKind kind = SceneKind::ScriptMatched;
};

struct Conversation {
  std::size_t scene_index = 0;
  std::set<std::string> participants;
  std::vector<std::size_t> utterance_indices;
};

enum class ConversationMode {
  AdjacentRuns,  // split on description breaks and on disjoint speaker pairs
  WholeScene,    // every speaker of the scene forms one conversation
};

struct ParseOptions {
  // Segments accepted as the trailing time-of-day of a heading.
  std::set<std::string> time_vocabulary = {
      "DAY",     "NIGHT",     "DUSK",       "DAWN",          "SUNSET",  "SUNRISE",
      "MORNING", "AFTERNOON", "EVENING",    "LATER",         "CONTINUOUS", "SAME",
      "MOMENTS LATER", "SAME TIME", "NIGHT (LATER)", "DAY (LATER)", "LATE AFTERNOON",
      "EARLY MORNING", "MIDDAY", "NOON", "MIDNIGHT", "TWILIGHT"};
  int tab_width = 8;
};

struct SceneBody {
  std::string description;
  std::vector<Utterance> utterances;
};

// Splits a screenplay into scenes, one per INT/EXT heading line. Text before
// the first heading is ignored. Throws ParseError when no heading is found.
std::vector<Scene> chunk_scenes(std::string_view script_text, const ParseOptions& options = {});

// Parses a heading line; nullopt when the line is not a heading.
std::optional<SceneHeading> parse_heading(std::string_view line, const ParseOptions& options = {});

// Classifies the lines of one scene body (heading excluded). `margin` is the
// description indentation in columns; negative means "estimate it".
SceneBody structure_scene(std::string_view scene_body, int margin = -1,
                          const ParseOptions& options = {});

std::set<std::string> harvest_emphasis(std::string_view description,
                                       const std::set<std::string>& exclude = {});

std::vector<Conversation> detect_conversations(const Scene& scene,
                                               ConversationMode mode = ConversationMode::AdjacentRuns);

// Strips "(V.O.)", "(O.S.)", "(CONT'D)" and similar qualifiers and uppercases.
std::string normalize_speaker(std::string_view cue);

std::string_view to_string(Setting s);
std::string_view to_string(SceneKind k);
Setting setting_from_string(std::string_view s);
SceneKind scene_kind_from_string(std::string_view s);

}  // namespace storygraph::script
