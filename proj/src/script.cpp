#include "storygraph/script.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "storygraph/error.hpp"

namespace storygraph::script {
namespace {

struct Line {
  std::string raw;
  std::string text;  // trimmed
  int indent = 0;
  bool blank() const { return text.empty(); }
};

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<Line> split_lines(std::string_view text, int tab_width) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    Line line;
    line.raw = std::string(raw);
    line.text = std::string(trim(raw));
    int col = 0;
    for (char c : raw) {
      if (c == ' ') {
        ++col;
      } else if (c == '\t') {
        col += tab_width - (col % tab_width);
      } else {
        break;
      }
    }
    line.indent = col;
    lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (!lines.empty() && lines.back().raw.empty()) lines.pop_back();
  return lines;
}

bool has_lowercase(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::islower(static_cast<unsigned char>(c)); });
}

bool has_letter(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

// Removes every "(...)" group; an unclosed "(" swallows the rest.
std::string strip_parentheticals(std::string_view s, std::string* removed = nullptr) {
  std::string out;
  int depth = 0;
  for (char c : s) {
    if (c == '(') {
      ++depth;
    }
    if (depth > 0) {
      if (removed) removed->push_back(c);
    } else {
      out.push_back(c);
    }
    if (c == ')' && depth > 0) {
      --depth;
      if (removed && depth == 0) removed->push_back(' ');
    }
  }
  return out;
}

std::size_t word_count(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::size_t n = 0;
  std::string w;
  while (in >> w) ++n;
  return n;
}

bool is_cue_like(const Line& line) {
  if (line.blank() || line.text.front() == '(') return false;
  if (line.text.back() == ':') return false;  // transitions: CUT TO:
  if (line.text.size() > 48) return false;
  std::string name = strip_parentheticals(line.text);
  if (!has_letter(name) || has_lowercase(name)) return false;
  return word_count(name) <= 6 && !normalize_speaker(line.text).empty();
}

bool is_caps_line(const Line& line) {
  return !line.blank() && has_letter(line.text) && !has_lowercase(strip_parentheticals(line.text));
}

const std::set<std::string>& default_emphasis_exclusions() {
  static const std::set<std::string> kWords = {
      "INT", "EXT", "I/E", "CUT", "TO", "FADE", "IN", "OUT", "DISSOLVE", "CONTINUED", "CONT'D",
      "V.O", "O.S", "O.C", "POV", "ANGLE", "ON", "CLOSE", "SHOT", "INSERT", "THE", "END", "OF",
      "AND", "A"};
  return kWords;
}

struct PendingUtterance {
  std::vector<const Line*> lines;  // cue first
  int cue_indent = 0;
  std::vector<std::string> dialogue;
  std::string directions;
  bool in_paren = false;
};

class BodyParser {
 public:
  BodyParser(int margin, bool indented) : margin_(margin), indented_(indented) {}

  SceneBody parse(const std::vector<const Line*>& lines) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const Line& line = *lines[i];
      const Line* next = i + 1 < lines.size() ? lines[i + 1] : nullptr;
      if (line.blank()) {
        finish();
        continue;
      }
      if (pending_) {
        if (continues_utterance(line, next)) {
          add_dialogue_line(line);
          continue;
        }
        finish();
      }
      if (starts_utterance(line, next)) {
        pending_.emplace();
        pending_->lines.push_back(&line);
        pending_->cue_indent = line.indent;
        continue;
      }
      add_description(line.text);
    }
    finish();
    return std::move(body_);
  }

 private:
  bool starts_utterance(const Line& line, const Line* next) const {
    if (!is_cue_like(line)) return false;
    if (indented_) return line.indent > margin_;
    // Unindented scripts: a short caps line directly followed by a non-caps line.
    return word_count(strip_parentheticals(line.text)) <= 4 && next != nullptr && !next->blank() &&
           !is_caps_line(*next);
  }

  bool continues_utterance(const Line& line, const Line* next) const {
    if (pending_->in_paren) return true;
    if (indented_) {
      if (line.indent <= margin_) return false;
      // A caps line at or beyond the cue column is the next speaker.
      if (pending_->lines.size() > 1 && is_cue_like(line) && line.indent >= pending_->cue_indent &&
          !pending_->dialogue.empty())
        return false;
      return true;
    }
    return pending_->dialogue.empty() || !starts_utterance(line, next);
  }

  void add_dialogue_line(const Line& line) {
    pending_->lines.push_back(&line);
    std::string_view t = line.text;
    if (pending_->in_paren || t.front() == '(') {
      pending_->directions += std::string(t) + " ";
      pending_->in_paren = t.find(')') == std::string_view::npos;
      return;
    }
    pending_->dialogue.emplace_back(t);
  }

  void add_description(std::string_view text) {
    if (!body_.description.empty()) body_.description.push_back('\n');
    body_.description.append(text);
    description_since_utterance_ = true;
  }

  void finish() {
    if (!pending_) return;
    PendingUtterance p = std::move(*pending_);
    pending_.reset();
    std::string joined;
    for (const auto& d : p.dialogue) {
      if (!joined.empty()) joined.push_back(' ');
      joined += d;
    }
    std::string inline_dirs;
    std::string text = collapse_spaces(strip_parentheticals(joined, &inline_dirs));
    if (text.empty()) {
      for (const Line* l : p.lines) add_description(l->text);
      return;
    }
    Utterance u;
    u.speaker = normalize_speaker(p.lines.front()->text);
    u.cue = p.lines.front()->text;
    u.text = std::move(text);
    u.directions = collapse_spaces(p.directions + inline_dirs);
    u.index_in_scene = body_.utterances.size();
    u.after_description = description_since_utterance_;
    description_since_utterance_ = false;
    body_.utterances.push_back(std::move(u));
  }

  int margin_;
  bool indented_;
  SceneBody body_;
  std::optional<PendingUtterance> pending_;
  bool description_since_utterance_ = false;
};

bool layout_is_indented(const std::vector<const Line*>& lines, int margin) {
  return std::any_of(lines.begin(), lines.end(),
                     [&](const Line* l) { return !l->blank() && l->indent > margin && is_cue_like(*l); });
}

std::set<std::string> heading_words(const SceneHeading& h) {
  std::set<std::string> out;
  std::istringstream in(upper(h.raw));
  std::string w;
  while (in >> w) {
    auto b = w.find_first_not_of(".,:;-!?\"'");
    auto e = w.find_last_not_of(".,:;-!?\"'");
    if (b != std::string::npos) out.insert(w.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

std::string normalize_speaker(std::string_view cue) {
  std::string name = collapse_spaces(strip_parentheticals(cue));
  while (!name.empty() && (name.back() == ':' || name.back() == '.' || name.back() == ' ')) name.pop_back();
  return upper(name);
}

std::optional<SceneHeading> parse_heading(std::string_view line, const ParseOptions& options) {
  std::string_view t = trim(line);
  if (t.empty() || has_lowercase(t)) return std::nullopt;
  // optional leading scene number, e.g. "12" or "12A"
  if (std::isdigit(static_cast<unsigned char>(t.front()))) {
    auto sp = t.find_first_of(" \t");
    if (sp == std::string_view::npos) return std::nullopt;
    std::string_view num = t.substr(0, sp);
    if (!std::all_of(num.begin(), num.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)); }))
      return std::nullopt;
    t = trim(t.substr(sp));
    // matching trailing scene number
    auto last_sp = t.find_last_of(" \t");
    if (last_sp != std::string_view::npos && t.substr(last_sp + 1) == num) t = trim(t.substr(0, last_sp));
  }
  static const std::pair<std::string_view, Setting> kMarkers[] = {
      {"INT./EXT.", Setting::Unknown}, {"EXT./INT.", Setting::Unknown}, {"INT/EXT", Setting::Unknown},
      {"EXT/INT", Setting::Unknown},   {"I/E", Setting::Unknown},       {"INT", Setting::Interior},
      {"EXT", Setting::Exterior}};
  SceneHeading h;
  std::string_view rest;
  bool found = false;
  for (const auto& [marker, setting] : kMarkers) {
    if (t.substr(0, marker.size()) != marker) continue;
    std::string_view after = t.substr(marker.size());
    if (!after.empty() && after.front() != '.' && after.front() != ' ' && after.front() != '\t') continue;
    auto b = after.find_first_not_of(". \t");
    if (b == std::string_view::npos) return std::nullopt;
    rest = after.substr(b);
    h.setting = setting;
    found = true;
    break;
  }
  if (!found) return std::nullopt;

  // Split on hyphen runs surrounded by spaces.
  std::vector<std::string> segments;
  std::string cur;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == '-' && i > 0 && std::isspace(static_cast<unsigned char>(rest[i - 1]))) {
      std::size_t j = i;
      while (j < rest.size() && rest[j] == '-') ++j;
      if (j == rest.size() || std::isspace(static_cast<unsigned char>(rest[j]))) {
        segments.push_back(collapse_spaces(cur));
        cur.clear();
        i = j;
        continue;
      }
    }
    cur.push_back(rest[i]);
  }
  segments.push_back(collapse_spaces(cur));
  std::erase_if(segments, [](const std::string& s) { return s.empty(); });
  if (segments.empty()) return std::nullopt;

  if (segments.size() > 1) {
    std::string last = segments.back();
    while (!last.empty() && (last.back() == '.' || last.back() == ':')) last.pop_back();
    if (options.time_vocabulary.count(last) > 0) {
      h.time_of_day = last;
      segments.pop_back();
    }
  }
  std::string location;
  for (const auto& s : segments) {
    if (!location.empty()) location += " - ";
    location += s;
  }
  while (!location.empty() && (location.back() == '.' || location.back() == ':')) location.pop_back();
  if (location.empty()) return std::nullopt;
  h.location = upper(location);
  h.raw = std::string(trim(line));
  return h;
}

SceneBody structure_scene(std::string_view scene_body, int margin, const ParseOptions& options) {
  auto lines = split_lines(scene_body, options.tab_width);
  std::vector<const Line*> ptrs;
  for (const auto& l : lines) ptrs.push_back(&l);
  if (margin < 0) {
    margin = std::numeric_limits<int>::max();
    for (const auto& l : lines)
      if (!l.blank()) margin = std::min(margin, l.indent);
    if (margin == std::numeric_limits<int>::max()) margin = 0;
  }
  return BodyParser(margin, layout_is_indented(ptrs, margin)).parse(ptrs);
}

std::vector<Scene> chunk_scenes(std::string_view script_text, const ParseOptions& options) {
  auto lines = split_lines(script_text, options.tab_width);
  std::vector<std::size_t> heading_lines;
  std::vector<SceneHeading> headings;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (auto h = parse_heading(lines[i].raw, options)) {
      heading_lines.push_back(i);
      headings.push_back(std::move(*h));
    }
  }
  if (heading_lines.empty()) {
    std::string msg = "no scene headings found; first lines inspected:";
    std::size_t shown = 0;
    for (const auto& l : lines) {
      if (l.blank()) continue;
      msg += " [" + l.text + "]";
      if (++shown == 3) break;
    }
    throw ParseError(msg);
  }

  // Description margin = most common heading indentation.
  std::map<int, int> indent_counts;
  for (auto i : heading_lines) ++indent_counts[lines[i].indent];
  int margin = std::max_element(indent_counts.begin(), indent_counts.end(),
                                [](const auto& a, const auto& b) { return a.second < b.second; })
                   ->first;

  std::vector<const Line*> body_lines;
  for (std::size_t i = heading_lines.front() + 1; i < lines.size(); ++i)
    if (!std::binary_search(heading_lines.begin(), heading_lines.end(), i)) body_lines.push_back(&lines[i]);
  const bool indented = layout_is_indented(body_lines, margin);

  std::vector<Scene> scenes;
  scenes.reserve(heading_lines.size());
  for (std::size_t s = 0; s < heading_lines.size(); ++s) {
    std::size_t end = s + 1 < heading_lines.size() ? heading_lines[s + 1] : lines.size();
    std::vector<const Line*> body;
    for (std::size_t i = heading_lines[s] + 1; i < end; ++i) body.push_back(&lines[i]);
    SceneBody parsed = BodyParser(margin, indented).parse(body);
    Scene scene;
    scene.index = s;
    scene.heading = std::move(headings[s]);
    scene.description = std::move(parsed.description);
    scene.utterances = std::move(parsed.utterances);
    std::set<std::string> exclude = heading_words(scene.heading);
    for (const auto& w : options.time_vocabulary) exclude.insert(w);
    scene.emphasized_terms = harvest_emphasis(scene.description, exclude);
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::set<std::string> harvest_emphasis(std::string_view description, const std::set<std::string>& exclude) {
  std::set<std::string> out;
  std::vector<std::string> run;
  auto flush = [&] {
    if (!run.empty()) {
      std::string term;
      for (const auto& w : run) {
        if (!term.empty()) term.push_back(' ');
        term += w;
      }
      out.insert(std::move(term));
      run.clear();
    }
  };
  auto is_edge_punct = [](char c) { return !std::isalnum(static_cast<unsigned char>(c)); };

  std::size_t i = 0;
  while (i < description.size()) {
    if (std::isspace(static_cast<unsigned char>(description[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < description.size() && !std::isspace(static_cast<unsigned char>(description[j]))) ++j;
    std::string_view tok = description.substr(i, j - i);
    i = j;

    std::size_t b = 0, e = tok.size();
    while (b < e && is_edge_punct(tok[b])) ++b;
    while (e > b && is_edge_punct(tok[e - 1])) --e;
    if (b > 0) flush();
    std::string word(tok.substr(b, e - b));
    if (word.size() > 2 && (word.ends_with("'S"))) word.resize(word.size() - 2);
    int letters = 0;
    for (char c : word) letters += std::isalpha(static_cast<unsigned char>(c)) ? 1 : 0;
    bool caps = letters >= 2 && !has_lowercase(word);
    if (caps && exclude.count(word) == 0 && default_emphasis_exclusions().count(word) == 0) {
      run.push_back(word);
    } else {
      flush();
    }
    if (e < tok.size()) flush();
  }
  flush();
  return out;
}

std::vector<Conversation> detect_conversations(const Scene& scene, ConversationMode mode) {
  std::vector<Conversation> out;
  const auto& utts = scene.utterances;
  if (utts.empty()) return out;
  auto open = [&](std::size_t i) {
    Conversation c;
    c.scene_index = scene.index;
    c.utterance_indices.push_back(i);
    c.participants.insert(utts[i].speaker);
    out.push_back(std::move(c));
  };
  if (mode == ConversationMode::WholeScene) {
    open(0);
    for (std::size_t i = 1; i < utts.size(); ++i) {
      out.back().utterance_indices.push_back(i);
      out.back().participants.insert(utts[i].speaker);
    }
    return out;
  }
  std::size_t start = 0;
  open(0);
  for (std::size_t i = 1; i < utts.size(); ++i) {
    bool split = utts[i].after_description;
    if (!split && i - start >= 2 && i + 1 < utts.size()) {
      const std::set<std::string> recent = {utts[i - 1].speaker, utts[i - 2].speaker};
      split = recent.count(utts[i].speaker) == 0 && recent.count(utts[i + 1].speaker) == 0;
    }
    if (split) {
      start = i;
      open(i);
    } else {
      out.back().utterance_indices.push_back(i);
      out.back().participants.insert(utts[i].speaker);
    }
  }
  return out;
}

std::string_view to_string(Setting s) {
  switch (s) {
    case Setting::Interior:
      return "INT";
    case Setting::Exterior:
      return "EXT";
    default:
      return "UNKNOWN";
  }
}

std::string_view to_string(SceneKind k) {
  switch (k) {
    case SceneKind::ScriptMatched:
      return "matched";
    case SceneKind::BoundaryRetrieved:
      return "boundary_retrieved";
    default:
      return "meta";
  }
}

Setting setting_from_string(std::string_view s) {
  if (s == "INT") return Setting::Interior;
  if (s == "EXT") return Setting::Exterior;
  if (s == "UNKNOWN") return Setting::Unknown;
  throw ValidationError("unknown setting: " + std::string(s));
}

SceneKind scene_kind_from_string(std::string_view s) {
  if (s == "matched") return SceneKind::ScriptMatched;
  if (s == "boundary_retrieved") return SceneKind::BoundaryRetrieved;
  if (s == "meta") return SceneKind::Meta;
  throw ValidationError("unknown scene kind: " + std::string(s));
}

}  // namespace storygraph::script
