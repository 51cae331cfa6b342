#include "storygraph/annotations.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "storygraph/error.hpp"

namespace storygraph::annotations {
namespace {

using nlohmann::json;

std::string upper_trimmed(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

json parse_json_array(std::string_view text, const char* what) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return json::array();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
  }
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected a JSON array of records");
  return j;
}

[[noreturn]] void bad_record(const char* what, std::size_t i, const std::string& msg) {
  throw ValidationError(std::string(what) + " record " + std::to_string(i) + ": " + msg);
}

std::int64_t read_time(const json& r, const char* what, std::size_t i) {
  if (!r.contains("time_ms") || !r["time_ms"].is_number()) bad_record(what, i, "missing numeric time_ms");
  double t = r["time_ms"].get<double>();
  if (t < 0) bad_record(what, i, "negative time_ms");
  return static_cast<std::int64_t>(t);
}

BoundingBox read_bbox(const json& r, const char* what, std::size_t i) {
  if (!r.contains("bbox") || !r["bbox"].is_array() || r["bbox"].size() != 4)
    bad_record(what, i, "bbox must be [x, y, w, h]");
  const auto& b = r["bbox"];
  for (const auto& v : b)
    if (!v.is_number()) bad_record(what, i, "bbox values must be numbers");
  BoundingBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  if (box.w <= 0 || box.h <= 0) bad_record(what, i, "bbox width and height must be positive");
  return box;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImportError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

text::Stoplist term_set(const std::set<std::string>& words) {
  text::Stoplist s;
  for (const auto& w : words) s.add(w);
  return s;
}

}  // namespace

void EntityDictionary::close_aliases() {
  auto close = [](std::map<std::string, std::string>& m, const char* what) {
    std::map<std::string, std::string> fixed;
    for (const auto& [alias, target] : m) {
      std::string cur = target;
      std::set<std::string> seen = {alias};
      while (true) {
        auto it = m.find(cur);
        if (it == m.end() || it->second == cur) break;
        if (!seen.insert(cur).second)
          throw ValidationError(std::string(what) + " alias cycle through '" + cur + "'");
        cur = it->second;
      }
      fixed[alias] = cur;
    }
    for (const auto& [alias, target] : std::map<std::string, std::string>(fixed)) fixed[target] = target;
    m = std::move(fixed);
  };
  close(characters, "character");
  close(locations, "location");
}

bool EntityDictionary::is_character(std::string_view name) const {
  return characters.find(std::string(name)) != characters.end();
}

std::vector<FaceObservation> parse_faces(std::string_view json_text) {
  const char* what = "faces";
  json arr = parse_json_array(json_text, what);
  std::vector<FaceObservation> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& r = arr[i];
    if (!r.is_object()) bad_record(what, i, "not an object");
    FaceObservation f;
    f.time_ms = read_time(r, what, i);
    f.bbox = read_bbox(r, what, i);
    if (!r.contains("identity") || !r["identity"].is_string()) bad_record(what, i, "missing identity");
    f.identity = upper_trimmed(r["identity"].get<std::string>());
    if (f.identity.empty()) bad_record(what, i, "empty identity");
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.time_ms < b.time_ms; });
  return out;
}

std::vector<CaptionObservation> parse_captions(std::string_view json_text) {
  const char* what = "captions";
  json arr = parse_json_array(json_text, what);
  std::vector<CaptionObservation> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& r = arr[i];
    if (!r.is_object()) bad_record(what, i, "not an object");
    CaptionObservation c;
    c.time_ms = read_time(r, what, i);
    c.bbox = read_bbox(r, what, i);
    if (!r.contains("sentence") || !r["sentence"].is_string()) bad_record(what, i, "missing sentence");
    c.sentence = r["sentence"].get<std::string>();
    if (!r.contains("confidence") || !r["confidence"].is_number()) bad_record(what, i, "missing confidence");
    c.confidence = r["confidence"].get<double>();
    if (!(c.confidence >= 0.0 && c.confidence <= 1.0))
      bad_record(what, i, "confidence " + std::to_string(c.confidence) + " outside [0, 1]");
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.time_ms < b.time_ms; });
  return out;
}

EntityDictionary parse_entities(std::string_view json_text) {
  EntityDictionary d;
  if (json_text.find_first_not_of(" \t\r\n") == std::string_view::npos) return d;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("entities: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("entities: expected a JSON object");
  auto read_map = [&](const char* key, std::map<std::string, std::string>& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_object()) throw ValidationError(std::string("entities: '") + key + "' must be an object");
    for (const auto& [alias, target] : j[key].items()) {
      if (!target.is_string()) throw ValidationError(std::string("entities: alias '") + alias + "' is not a string");
      out[upper_trimmed(alias)] = upper_trimmed(target.get<std::string>());
    }
  };
  auto read_set = [&](const char* key) {
    std::set<std::string> out;
    if (!j[key].is_array()) throw ValidationError(std::string("entities: '") + key + "' must be an array");
    for (const auto& v : j[key]) {
      if (!v.is_string()) throw ValidationError(std::string("entities: '") + key + "' entries must be strings");
      out.insert(v.get<std::string>());
    }
    return out;
  };
  read_map("characters", d.characters);
  read_map("locations", d.locations);
  if (j.contains("keyword_blocklist")) d.keyword_blocklist = read_set("keyword_blocklist");
  if (j.contains("keyword_allowlist")) d.keyword_allowlist = read_set("keyword_allowlist");
  d.close_aliases();
  return d;
}

Annotations load_annotations(const std::string& faces_path, const std::string& captions_path) {
  Annotations a;
  if (!faces_path.empty()) a.faces = parse_faces(read_file(faces_path));
  if (!captions_path.empty()) a.captions = parse_captions(read_file(captions_path));
  return a;
}

std::string canonicalize(std::string_view name, const std::map<std::string, std::string>& aliases) {
  std::string key = upper_trimmed(name);
  auto it = aliases.find(key);
  return it == aliases.end() ? key : it->second;
}

std::vector<std::vector<std::string>> extract_keywords(const std::vector<text::TokenStream>& conversations,
                                                       const EntityDictionary& dict,
                                                       const text::Stoplist& stoplist,
                                                       const KeywordOptions& options) {
  const text::Stoplist blocked = term_set(dict.keyword_blocklist);
  std::optional<text::Stoplist> allowed;
  if (dict.keyword_allowlist) allowed = term_set(*dict.keyword_allowlist);

  std::vector<std::vector<std::string>> docs;
  docs.reserve(conversations.size());
  for (const auto& c : conversations) {
    std::vector<std::string> kept;
    for (const auto& t : c.tokens) {
      if (stoplist.contains(t) || blocked.contains(t)) continue;
      if (allowed && !allowed->contains(t)) continue;
      kept.push_back(t);
    }
    docs.push_back(std::move(kept));
  }
  auto vectors = text::tfidf_vectors(std::span<const std::vector<std::string>>(docs));
  std::vector<std::vector<std::string>> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    std::vector<std::pair<std::string, double>> ranked(v.begin(), v.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.size() > options.top_k) ranked.resize(options.top_k);
    std::vector<std::string> terms;
    for (auto& [t, w] : ranked) terms.push_back(std::move(t));
    out.push_back(std::move(terms));
  }
  return out;
}

std::vector<std::string> extract_keywords(std::size_t conversation, const std::vector<text::TokenStream>& corpus,
                                          const EntityDictionary& dict, const text::Stoplist& stoplist,
                                          const KeywordOptions& options) {
  if (conversation >= corpus.size()) throw ValidationError("extract_keywords: conversation index out of range");
  return extract_keywords(corpus, dict, stoplist, options)[conversation];
}

std::optional<std::size_t> entry_containing(const align::Timeline& timeline, std::int64_t t) {
  const auto& entries = timeline.entries;
  auto it = std::upper_bound(entries.begin(), entries.end(), t,
                             [](std::int64_t v, const align::TimelineEntry& e) { return v < e.bounds.start_ms; });
  // Zero-length entries share their start with the next one; walk back past them.
  while (it != entries.begin()) {
    --it;
    if (t >= it->bounds.start_ms && t < it->bounds.end_ms) return static_cast<std::size_t>(it - entries.begin());
    if (it->bounds.end_ms <= t) break;
  }
  return std::nullopt;
}

BundleResult bundle_by_scene(const align::Timeline& timeline, const std::vector<script::Scene>& scenes,
                             const std::vector<FaceObservation>& faces,
                             const std::vector<CaptionObservation>& captions, const EntityDictionary& dict,
                             const text::Stoplist& stoplist, const BundleOptions& options) {
  BundleResult result;
  struct ConvRef {
    std::size_t bundle;
    script::Conversation conv;
  };
  std::vector<ConvRef> convs;
  std::vector<text::TokenStream> corpus;

  for (std::size_t k = 0; k < timeline.entries.size(); ++k) {
    const auto& entry = timeline.entries[k];
    SceneBundle b;
    b.scene_index = k;
    b.kind = entry.kind;
    b.bounds = entry.bounds;
    if (entry.kind != script::SceneKind::Meta) {
      if (entry.scene_indices.size() != 1 || entry.scene_indices.front() >= scenes.size())
        throw ValidationError("timeline entry " + std::to_string(k) + " references an unknown scene");
      const auto& scene = scenes[entry.scene_indices.front()];
      b.location = canonicalize(scene.heading.location, dict.locations);
      for (const auto& u : scene.utterances) b.characters.insert(canonicalize(u.speaker, dict.characters));
      if (options.mention_presence) {
        for (const auto& term : scene.emphasized_terms) {
          std::string c = canonicalize(term, dict.characters);
          if (dict.is_character(c)) b.characters.insert(c);
        }
      }
      for (auto& conv : script::detect_conversations(scene, options.conversation_mode)) {
        std::string joined;
        for (auto ui : conv.utterance_indices) joined += scene.utterances[ui].text + " ";
        corpus.push_back(text::normalize(joined));
        convs.push_back({k, std::move(conv)});
      }
    }
    result.bundles.push_back(std::move(b));
  }

  if (!corpus.empty()) {
    auto keywords = extract_keywords(corpus, dict, stoplist, options.keywords);
    for (std::size_t c = 0; c < convs.size(); ++c) {
      auto& bundle = result.bundles[convs[c].bundle];
      const auto& scene = scenes[timeline.entries[convs[c].bundle].scene_indices.front()];
      BundleConversation bc;
      bc.keywords.insert(keywords[c].begin(), keywords[c].end());
      for (const auto& p : convs[c].conv.participants) bc.participants.insert(canonicalize(p, dict.characters));
      for (auto ui : convs[c].conv.utterance_indices) {
        const auto& u = scene.utterances[ui];
        auto speaker = canonicalize(u.speaker, dict.characters);
        auto& said = bc.speaker_keywords[speaker];
        for (const auto& t : text::normalize(u.text).tokens)
          if (bc.keywords.count(t)) said.insert(t);
      }
      bundle.keywords.insert(bc.keywords.begin(), bc.keywords.end());
      bundle.conversations.push_back(std::move(bc));
    }
  }

  for (const auto& f : faces) {
    if (auto k = entry_containing(timeline, f.time_ms)) {
      result.bundles[*k].faces.insert(f.identity);
    } else {
      ++result.dropped_faces;
    }
  }
  for (const auto& c : captions) {
    if (auto k = entry_containing(timeline, c.time_ms)) {
      result.bundles[*k].captions.push_back(c);
    } else {
      ++result.dropped_captions;
    }
  }
  return result;
}

}  // namespace storygraph::annotations
