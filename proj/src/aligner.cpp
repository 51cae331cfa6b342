#include "storygraph/aligner.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>

#include "storygraph/error.hpp"

namespace storygraph::align {
namespace {

using Tokens = std::vector<std::string>;

bool contains_contiguous(const Tokens& haystack, const Tokens& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

AlignUnit make_unit(std::string_view text, const text::Stoplist& stoplist) {
  AlignUnit u;
  auto ts = text::normalize(text);
  u.content = text::remove_stopwords(ts, stoplist).tokens;
  u.tokens = std::move(ts.tokens);
  return u;
}

// Utterance slots for one inclusion candidate.
struct Candidate {
  std::size_t first = 0;
  std::size_t count = 0;
  double score = 0.0;
};

}  // namespace

void ShotList::validate() const {
  for (std::size_t i = 0; i < boundaries_ms.size(); ++i) {
    if (boundaries_ms[i] < 0) throw ValidationError("shot boundary " + std::to_string(i) + " is negative");
    if (i > 0 && boundaries_ms[i] <= boundaries_ms[i - 1])
      throw ValidationError("shot boundaries not strictly increasing at " + std::to_string(i));
  }
}

std::vector<AlignUnit> utterance_units(const std::vector<script::Scene>& scenes, const text::Stoplist& stoplist) {
  std::vector<AlignUnit> out;
  for (const auto& scene : scenes) {
    for (std::size_t i = 0; i < scene.utterances.size(); ++i) {
      AlignUnit u = make_unit(scene.utterances[i].text, stoplist);
      u.scene_index = scene.index;
      u.utterance_index = i;
      out.push_back(std::move(u));
    }
  }
  return out;
}

std::vector<AlignUnit> subtitle_units(const std::vector<subtitles::SubtitleBlock>& blocks,
                                      const text::Stoplist& stoplist) {
  std::vector<AlignUnit> out;
  out.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    AlignUnit u = make_unit(subtitles::subtitle_text(blocks[i]), stoplist);
    u.utterance_index = i;
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<UtteranceMatch> MatchState::matches() const {
  std::vector<UtteranceMatch> out;
  for (const auto& m : by_utterance)
    if (m) out.push_back(*m);
  return out;
}

std::pair<std::ptrdiff_t, std::ptrdiff_t> MatchState::window(std::size_t u) const {
  std::ptrdiff_t lo = -1;
  auto hi = static_cast<std::ptrdiff_t>(block_used.size());
  for (std::size_t k = u; k-- > 0;) {
    if (by_utterance[k]) {
      lo = static_cast<std::ptrdiff_t>(by_utterance[k]->subtitle_positions.back());
      break;
    }
  }
  for (std::size_t k = u + 1; k < by_utterance.size(); ++k) {
    if (by_utterance[k]) {
      hi = static_cast<std::ptrdiff_t>(by_utterance[k]->subtitle_positions.front());
      break;
    }
  }
  return {lo, hi};
}

void match_exact(const std::vector<AlignUnit>& utterances, const std::vector<AlignUnit>& blocks,
                 MatchState& state) {
  // Intern token sequences so the LCS table compares integers.
  std::unordered_map<std::string, int> ids;
  auto id_of = [&](const Tokens& t) -> int {
    if (t.empty()) return -1;
    auto key = text::join(t, "\x1f");
    return ids.emplace(std::move(key), static_cast<int>(ids.size())).first->second;
  };
  std::vector<int> uid, bid;
  for (const auto& u : utterances) uid.push_back(id_of(u.tokens));
  for (const auto& b : blocks) bid.push_back(id_of(b.tokens));

  const std::size_t nu = utterances.size(), nb = blocks.size();
  auto eq = [&](std::size_t i, std::size_t j) {
    return uid[i] >= 0 && uid[i] == bid[j] && !state.by_utterance[i] && !state.block_used[j];
  };
  std::vector<std::uint32_t> dp((nu + 1) * (nb + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return dp[i * (nb + 1) + j]; };
  for (std::size_t i = 1; i <= nu; ++i)
    for (std::size_t j = 1; j <= nb; ++j)
      at(i, j) = eq(i - 1, j - 1) ? at(i - 1, j - 1) + 1 : std::max(at(i - 1, j), at(i, j - 1));

  std::size_t i = nu, j = nb;
  while (i > 0 && j > 0) {
    if (eq(i - 1, j - 1) && at(i, j) == at(i - 1, j - 1) + 1) {
      UtteranceMatch m;
      m.scene_index = utterances[i - 1].scene_index;
      m.utterance_index = utterances[i - 1].utterance_index;
      m.subtitle_positions = {j - 1};
      m.method = MatchMethod::Exact;
      m.score = 1.0;
      state.by_utterance[i - 1] = std::move(m);
      state.block_used[j - 1] = true;
      --i;
      --j;
    } else if (at(i - 1, j) >= at(i, j - 1)) {
      --i;
    } else {
      --j;
    }
  }
}

void match_inclusion(const std::vector<AlignUnit>& utterances, const std::vector<AlignUnit>& blocks,
                     MatchState& state, const AlignOptions& options) {
  const std::size_t min_tokens = std::max<std::size_t>(1, options.min_inclusion_tokens);
  for (std::size_t u = 0; u < utterances.size(); ++u) {
    if (state.by_utterance[u]) continue;
    const Tokens& utt = utterances[u].tokens;
    if (utt.empty()) continue;
    auto [lo, hi] = state.window(u);
    std::optional<Candidate> chosen;
    for (auto b = lo + 1; b < hi && !chosen; ++b) {
      std::optional<Candidate> containing, contained;
      Tokens concat;
      for (std::size_t len = 1; len <= options.max_blocks_per_utterance; ++len) {
        auto pos = static_cast<std::size_t>(b) + len - 1;
        if (static_cast<std::ptrdiff_t>(pos) >= hi || state.block_used[pos]) break;
        const Tokens& bt = blocks[pos].tokens;
        concat.insert(concat.end(), bt.begin(), bt.end());
        if (concat.empty()) continue;
        if (utt.size() >= min_tokens && contains_contiguous(concat, utt)) {
          containing = Candidate{static_cast<std::size_t>(b), len,
                                 static_cast<double>(utt.size()) / static_cast<double>(concat.size())};
          break;
        }
        if (concat.size() >= min_tokens && contains_contiguous(utt, concat)) {
          contained = Candidate{static_cast<std::size_t>(b), len,
                                static_cast<double>(concat.size()) / static_cast<double>(utt.size())};
        }
      }
      if (containing) {
        chosen = containing;
      } else if (contained) {
        chosen = contained;
      }
    }
    if (!chosen) continue;
    UtteranceMatch m;
    m.scene_index = utterances[u].scene_index;
    m.utterance_index = utterances[u].utterance_index;
    for (std::size_t k = 0; k < chosen->count; ++k) {
      m.subtitle_positions.push_back(chosen->first + k);
      state.block_used[chosen->first + k] = true;
    }
    m.method = MatchMethod::Inclusion;
    m.score = std::min(1.0, chosen->score);
    state.by_utterance[u] = std::move(m);
  }
}

void match_cosine(const std::vector<AlignUnit>& utterances, const std::vector<AlignUnit>& blocks,
                  MatchState& state, const AlignOptions& options) {
  std::vector<std::size_t> pending;
  std::vector<bool> in_window(blocks.size(), false);
  for (std::size_t u = 0; u < utterances.size(); ++u) {
    if (state.by_utterance[u]) continue;
    pending.push_back(u);
    auto [lo, hi] = state.window(u);
    for (auto b = lo + 1; b < hi; ++b)
      if (!state.block_used[static_cast<std::size_t>(b)]) in_window[static_cast<std::size_t>(b)] = true;
  }
  if (pending.empty()) return;

  // Corpus: remaining utterances followed by every windowed free block.
  std::vector<Tokens> corpus;
  for (auto u : pending) corpus.push_back(utterances[u].content);
  std::vector<std::ptrdiff_t> block_doc(blocks.size(), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!in_window[b]) continue;
    block_doc[b] = static_cast<std::ptrdiff_t>(corpus.size());
    corpus.push_back(blocks[b].content);
  }
  const auto vectors = text::tfidf_vectors(std::span<const Tokens>(corpus));

  for (std::size_t p = 0; p < pending.size(); ++p) {
    const std::size_t u = pending[p];
    const auto& uv = vectors[p];
    if (uv.empty()) continue;
    auto [lo, hi] = state.window(u);
    std::optional<std::size_t> best;
    double best_score = -1.0;
    for (auto b = lo + 1; b < hi; ++b) {
      auto pos = static_cast<std::size_t>(b);
      if (state.block_used[pos] || block_doc[pos] < 0) continue;
      double c = text::cosine(uv, vectors[static_cast<std::size_t>(block_doc[pos])]);
      if (c > best_score) {
        best_score = c;
        best = pos;
      }
    }
    if (!best || best_score < options.cosine_threshold) continue;
    UtteranceMatch m;
    m.scene_index = utterances[u].scene_index;
    m.utterance_index = utterances[u].utterance_index;
    m.subtitle_positions = {*best};
    m.method = MatchMethod::Cosine;
    m.score = best_score;
    state.block_used[*best] = true;
    state.by_utterance[u] = std::move(m);
  }
}

script::TimeBounds infer_scene_bounds(const std::vector<UtteranceMatch>& scene_matches,
                                      const std::vector<subtitles::SubtitleBlock>& blocks,
                                      const ShotList& shots) {
  if (scene_matches.empty()) throw AlignmentError("infer_scene_bounds: scene has no matches");
  std::int64_t start = std::numeric_limits<std::int64_t>::max();
  std::int64_t end = std::numeric_limits<std::int64_t>::min();
  for (const auto& m : scene_matches) {
    for (auto pos : m.subtitle_positions) {
      start = std::min(start, blocks.at(pos).start_ms);
      end = std::max(end, blocks.at(pos).end_ms);
    }
  }
  const auto& s = shots.boundaries_ms;
  auto up = std::upper_bound(s.begin(), s.end(), start);
  if (up != s.begin()) start = *std::prev(up);
  auto lb = std::lower_bound(s.begin(), s.end(), end);
  if (lb != s.end()) end = *lb;
  return {start, end};
}

std::string TimelineEntry::label() const {
  if (scene_indices.empty()) return "Scene ?";
  std::string first = std::to_string(scene_indices.front() + 1);
  if (kind != script::SceneKind::Meta) return "Scene " + first;
  if (scene_indices.size() == 1) return "Meta Scene " + first;
  return "Meta Scene " + first + "-" + std::to_string(scene_indices.back() + 1);
}

AlignmentStats compute_stats(const std::vector<TimelineEntry>& entries) {
  AlignmentStats st;
  for (const auto& e : entries) {
    switch (e.kind) {
      case script::SceneKind::ScriptMatched:
        ++st.matched;
        break;
      case script::SceneKind::BoundaryRetrieved:
        ++st.boundary_retrieved;
        st.boundary_empty += e.empty_scenes;
        break;
      case script::SceneKind::Meta:
        ++st.meta;
        st.meta_empty += e.empty_scenes;
        break;
    }
  }
  st.total = entries.size();
  st.total_empty = st.boundary_empty + st.meta_empty;
  return st;
}

Timeline fill_gaps(const std::vector<script::Scene>& scenes,
                   const std::vector<std::optional<script::TimeBounds>>& matched_bounds,
                   std::int64_t movie_end_ms) {
  if (matched_bounds.size() != scenes.size())
    throw AlignmentError("fill_gaps: bounds list does not cover every scene");
  std::vector<std::size_t> matched;
  for (std::size_t i = 0; i < scenes.size(); ++i)
    if (matched_bounds[i]) matched.push_back(i);
  if (matched.empty()) throw AlignmentError("alignment failed: no scene could be matched to the subtitles");

  Timeline tl;
  tl.movie_end_ms = std::max(movie_end_ms, matched_bounds[matched.back()]->end_ms);
  auto empties = [&](std::size_t from, std::size_t to) {
    std::size_t n = 0;
    for (std::size_t i = from; i < to; ++i) n += scenes[i].utterances.empty() ? 1 : 0;
    return n;
  };
  auto gap = [&](std::size_t from, std::size_t to, std::int64_t start, std::int64_t end, bool bounded) {
    if (from >= to) return;
    TimelineEntry e;
    e.kind = (bounded && to - from == 1) ? script::SceneKind::BoundaryRetrieved : script::SceneKind::Meta;
    for (std::size_t i = from; i < to; ++i) e.scene_indices.push_back(i);
    e.bounds = {start, end};
    e.empty_scenes = empties(from, to);
    tl.entries.push_back(std::move(e));
  };

  gap(0, matched.front(), 0, matched_bounds[matched.front()]->start_ms, false);
  for (std::size_t k = 0; k < matched.size(); ++k) {
    std::size_t i = matched[k];
    TimelineEntry e;
    e.kind = script::SceneKind::ScriptMatched;
    e.scene_indices = {i};
    e.bounds = *matched_bounds[i];
    e.empty_scenes = empties(i, i + 1);
    tl.entries.push_back(std::move(e));
    if (k + 1 < matched.size()) {
      std::size_t next = matched[k + 1];
      gap(i + 1, next, matched_bounds[i]->end_ms, matched_bounds[next]->start_ms, true);
    }
  }
  gap(matched.back() + 1, scenes.size(), matched_bounds[matched.back()]->end_ms, tl.movie_end_ms, false);
  tl.stats = compute_stats(tl.entries);
  return tl;
}

std::string alignment_report(const Timeline& timeline, const std::string& episode) {
  const auto& s = timeline.stats;
  auto cell = [](std::size_t n, std::size_t empty) {
    return std::to_string(n) + " (" + std::to_string(empty) + ")";
  };
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-10s %-22s %-14s %-14s\n", "episode", "matched",
                "boundary_retrieved", "meta", "total");
  out << line;
  std::snprintf(line, sizeof line, "%-10s %-10zu %-22s %-14s %-14s\n", episode.c_str(), s.matched,
                cell(s.boundary_retrieved, s.boundary_empty).c_str(), cell(s.meta, s.meta_empty).c_str(),
                cell(s.total, s.total_empty).c_str());
  out << line;
  return out.str();
}

Timeline align(const std::vector<script::Scene>& scenes, const std::vector<subtitles::SubtitleBlock>& blocks,
               const ShotList& shots, const AlignOptions& options, const text::Stoplist& stoplist) {
  shots.validate();
  const auto utts = utterance_units(scenes, stoplist);
  const auto subs = subtitle_units(blocks, stoplist);
  MatchState state(utts.size(), subs.size());
  match_exact(utts, subs, state);
  match_inclusion(utts, subs, state, options);
  match_cosine(utts, subs, state, options);
  auto matches = state.matches();

  std::map<std::size_t, std::vector<UtteranceMatch>> by_scene;
  for (const auto& m : matches) by_scene[m.scene_index].push_back(m);

  std::vector<std::optional<script::TimeBounds>> bounds(scenes.size());
  std::vector<script::TimeBounds> raw(scenes.size());
  for (const auto& [scene, ms] : by_scene) {
    raw[scene] = infer_scene_bounds(ms, blocks, ShotList{});
    bounds[scene] = infer_scene_bounds(ms, blocks, shots);
  }
  // Snapping can push neighbours into each other; cut them at one instant.
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    if (!bounds[i]) continue;
    if (prev && bounds[i]->start_ms < bounds[*prev]->end_ms) {
      auto& a = *bounds[*prev];
      auto& b = *bounds[i];
      std::int64_t cut = raw[*prev].end_ms <= raw[i].start_ms
                             ? std::clamp(b.start_ms, raw[*prev].end_ms, raw[i].start_ms)
                             : raw[i].start_ms;
      cut = std::clamp(cut, a.start_ms, b.end_ms);
      a.end_ms = cut;
      b.start_ms = cut;
    }
    prev = i;
  }

  std::int64_t movie_end = 0;
  for (const auto& b : blocks) movie_end = std::max(movie_end, b.end_ms);
  if (options.movie_end_ms) movie_end = *options.movie_end_ms;
  Timeline tl = fill_gaps(scenes, bounds, movie_end);
  tl.matches = std::move(matches);
  return tl;
}

std::string_view to_string(MatchMethod m) {
  switch (m) {
    case MatchMethod::Exact:
      return "exact";
    case MatchMethod::Inclusion:
      return "inclusion";
    default:
      return "cosine";
  }
}

MatchMethod match_method_from_string(std::string_view s) {
  if (s == "exact") return MatchMethod::Exact;
  if (s == "inclusion") return MatchMethod::Inclusion;
  if (s == "cosine") return MatchMethod::Cosine;
  throw ValidationError("unknown match method: " + std::string(s));
}

}  // namespace storygraph::align
