#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "storygraph/aligner.hpp"
#include "storygraph/error.hpp"
#include "storygraph/script.hpp"
#include "storygraph/subtitles.hpp"

using namespace storygraph;
using namespace storygraph::align;
using script::SceneKind;
using script::TimeBounds;

namespace {

script::Scene make_scene(std::size_t index, std::vector<std::string> lines) {
  script::Scene s;
  s.index = index;
  s.heading.location = "PLACE " + std::to_string(index);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    script::Utterance u;
    u.speaker = i % 2 ? "B" : "A";
    u.text = lines[i];
    u.index_in_scene = i;
    s.utterances.push_back(u);
  }
  return s;
}

subtitles::SubtitleBlock block(int index, std::int64_t start, std::int64_t end, std::string text) {
  return {index, start, end, {std::move(text)}};
}

std::vector<AlignUnit> units(const std::vector<std::string>& texts) {
  std::vector<subtitles::SubtitleBlock> blocks;
  for (std::size_t i = 0; i < texts.size(); ++i) blocks.push_back(block(static_cast<int>(i + 1), 0, 1, texts[i]));
  return subtitle_units(blocks, text::Stoplist::english());
}

std::vector<AlignUnit> utter(const std::vector<std::string>& texts) {
  return utterance_units({make_scene(0, texts)}, text::Stoplist::english());
}

void check_timeline_invariants(const Timeline& t) {
  CHECK(t.stats.matched + t.stats.boundary_retrieved + t.stats.meta == t.entries.size());
  CHECK(t.stats.total == t.entries.size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(t.entries[i].bounds.start_ms <= t.entries[i].bounds.end_ms);
    if (i > 0) CHECK(t.entries[i - 1].bounds.end_ms <= t.entries[i].bounds.start_ms);
    if (t.entries[i].kind != SceneKind::ScriptMatched && i > 0 && i + 1 < t.entries.size()) {
      CHECK(t.entries[i].bounds.start_ms == t.entries[i - 1].bounds.end_ms);
      CHECK(t.entries[i].bounds.end_ms == t.entries[i + 1].bounds.start_ms);
    }
  }
}

}  // namespace

TEST_SUITE("aligner") {
  TEST_CASE("exact pass") {
    auto u = utter({"Help me", "Help me now", ""});
    auto b = units({"Help me", "something else"});
    MatchState st(u.size(), b.size());
    match_exact(u, b, st);
    REQUIRE(st.by_utterance[0]);
    CHECK(st.by_utterance[0]->method == MatchMethod::Exact);
    CHECK(st.by_utterance[0]->score == 1.0);
    CHECK(st.by_utterance[0]->subtitle_positions == std::vector<std::size_t>{0});
    CHECK_FALSE(st.by_utterance[1]);
    CHECK_FALSE(st.by_utterance[2]);
  }

  TEST_CASE("exact pass keeps subtitle order") {
    auto u = utter({"alpha beta", "gamma delta", "alpha beta"});
    auto b = units({"gamma delta", "alpha beta"});
    MatchState st(u.size(), b.size());
    match_exact(u, b, st);
    auto m = st.matches();
    REQUIRE(m.size() == 2);
    CHECK(m[0].utterance_index == 1);
    CHECK(m[1].utterance_index == 2);
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(m[i - 1].subtitle_positions.back() < m[i].subtitle_positions.front());
  }

  TEST_CASE("inclusion pass") {
    SUBCASE("utterance inside block") {
      auto u = utter({"use the force"});
      auto b = units({"Luke, use the force wisely"});
      MatchState st(u.size(), b.size());
      match_inclusion(u, b, st);
      REQUIRE(st.by_utterance[0]);
      CHECK(st.by_utterance[0]->method == MatchMethod::Inclusion);
    }
    SUBCASE("utterance split over two blocks") {
      auto u = utter({"I have a bad feeling about this place tonight"});
      auto b = units({"I have a bad feeling", "about this place"});
      MatchState st(u.size(), b.size());
      match_inclusion(u, b, st);
      REQUIRE(st.by_utterance[0]);
      CHECK(st.by_utterance[0]->subtitle_positions == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("interleaved tokens do not match") {
      auto u = utter({"red green blue"});
      auto b = units({"red yellow green purple blue"});
      MatchState st(u.size(), b.size());
      match_inclusion(u, b, st);
      CHECK_FALSE(st.by_utterance[0]);
    }
  }

  TEST_CASE("inclusion respects windows") {
    auto u = utter({"first line here", "the force", "last line here"});
    auto b = units({"first line here", "last line here", "use the force"});
    MatchState st(u.size(), b.size());
    match_exact(u, b, st);
    match_inclusion(u, b, st);
    CHECK_FALSE(st.by_utterance[1]);  // only candidate lies outside the window
  }

  TEST_CASE("cosine pass") {
    SUBCASE("stopword differences") {
      auto u = utter({"lanterns glow over harbour", "unrelated words entirely"});
      auto b = units({"the lanterns they glow over the harbour", "nothing similar at all here"});
      MatchState st(u.size(), b.size());
      match_cosine(u, b, st);
      REQUIRE(st.by_utterance[0]);
      CHECK(st.by_utterance[0]->method == MatchMethod::Cosine);
      CHECK(st.by_utterance[0]->score >= 0.3);
      CHECK_FALSE(st.by_utterance[1]);
    }
    SUBCASE("ties go to the earlier block") {
      auto u = utter({"ship crew"});
      auto b = units({"ship crew", "ship crew", "other stuff"});
      MatchState st(u.size(), b.size());
      match_cosine(u, b, st);
      REQUIRE(st.by_utterance[0]);
      CHECK(st.by_utterance[0]->subtitle_positions == std::vector<std::size_t>{0});
    }
  }

  TEST_CASE("scene bounds and shot snapping") {
    std::vector<subtitles::SubtitleBlock> blocks = {block(1, 10000, 15000, "a"), block(2, 16000, 20000, "b")};
    UtteranceMatch m1{0, 0, {0}, MatchMethod::Exact, 1.0}, m2{0, 1, {1}, MatchMethod::Exact, 1.0};
    CHECK(infer_scene_bounds({m1, m2}, blocks, ShotList{{9500, 21000}}) == TimeBounds{9500, 21000});
    CHECK(infer_scene_bounds({m1, m2}, blocks, ShotList{}) == TimeBounds{10000, 20000});
    CHECK(infer_scene_bounds({m1}, blocks, ShotList{{0, 9000, 17000}}) == TimeBounds{9000, 17000});
    CHECK_THROWS_AS(infer_scene_bounds({}, blocks, ShotList{}), AlignmentError);
    const ShotList repeated{{5, 5}}, negative{{-1, 5}};
    CHECK_THROWS_AS(repeated.validate(), ValidationError);
    CHECK_THROWS_AS(negative.validate(), ValidationError);
  }

  TEST_CASE("gap filling") {
    std::vector<script::Scene> scenes;
    for (std::size_t i = 0; i < 7; ++i) scenes.push_back(make_scene(i, {"x"}));
    scenes[3].utterances.clear();
    std::vector<std::optional<TimeBounds>> b(7);
    b[1] = TimeBounds{1000, 2000};
    b[3] = TimeBounds{3000, 4000};
    b[4] = TimeBounds{4000, 5000};
    auto t = fill_gaps(scenes, b, 9000);
    REQUIRE(t.entries.size() == 6);
    CHECK(t.entries[0].kind == SceneKind::Meta);
    CHECK(t.entries[0].bounds == TimeBounds{0, 1000});
    CHECK(t.entries[2].kind == SceneKind::BoundaryRetrieved);
    CHECK(t.entries[2].bounds == TimeBounds{2000, 3000});
    CHECK(t.entries[5].kind == SceneKind::Meta);
    CHECK(t.entries[5].scene_indices == std::vector<std::size_t>{5, 6});
    CHECK(t.entries[5].bounds == TimeBounds{5000, 9000});
    CHECK(t.entries[5].label() == "Meta Scene 6-7");
    check_timeline_invariants(t);

    std::vector<std::optional<TimeBounds>> none(7);
    CHECK_THROWS_AS(fill_gaps(scenes, none, 9000), AlignmentError);
  }

  TEST_CASE("all matched") {
    std::vector<script::Scene> scenes = {make_scene(0, {"a"}), make_scene(1, {"b"}), make_scene(2, {"c"})};
    std::vector<std::optional<TimeBounds>> b = {TimeBounds{0, 10}, TimeBounds{10, 20}, TimeBounds{20, 30}};
    auto t = fill_gaps(scenes, b, 30);
    CHECK(t.stats.matched == 3);
    CHECK(t.stats.meta == 0);
    CHECK(t.stats.total == 3);
  }

  TEST_CASE("end-to-end on the sample movie") {
    auto scenes = script::chunk_scenes(read_fixture("sample_script.txt"));
    auto srt = subtitles::parse_srt(read_fixture("sample.srt"));
    auto t = align::align(scenes, srt.blocks, ShotList{{0, 4000, 14000, 19000, 27000, 39000, 49000, 59000, 70000}});
    CHECK(t.stats.matched == 4);
    CHECK(t.stats.boundary_retrieved == 1);
    CHECK(t.stats.boundary_empty == 1);
    check_timeline_invariants(t);
    // every block used at most once, order preserved
    std::vector<int> used(srt.blocks.size(), 0);
    std::size_t last = 0;
    for (const auto& m : t.matches) {
      for (auto p : m.subtitle_positions) ++used[p];
      CHECK(m.subtitle_positions.front() >= last);
      last = m.subtitle_positions.back();
    }
    for (auto u : used) CHECK(u <= 1);
    auto report = alignment_report(t);
    CHECK(report.find("1 (1)") != std::string::npos);
  }

  TEST_CASE("exact matches survive later passes") {
    std::mt19937 rng(17);
    const std::vector<std::string> vocab = {"ship", "crew", "harbour", "storm", "signal", "lantern", "captain", "night"};
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<std::string> lines, subs;
      for (int i = 0; i < 12; ++i) {
        std::string s;
        for (int k = 0; k < 3 + static_cast<int>(rng() % 3); ++k) s += vocab[rng() % vocab.size()] + " ";
        lines.push_back(s);
        if (rng() % 3) subs.push_back(rng() % 2 ? s : s + " " + vocab[rng() % vocab.size()]);
      }
      auto u = utter(lines);
      auto b = units(subs);
      MatchState st(u.size(), b.size());
      match_exact(u, b, st);
      auto exact = st.matches();
      match_inclusion(u, b, st);
      match_cosine(u, b, st);
      auto all = st.matches();
      for (const auto& e : exact) {
        auto it = std::find_if(all.begin(), all.end(), [&](const UtteranceMatch& m) {
          return m.utterance_index == e.utterance_index && m.scene_index == e.scene_index;
        });
        REQUIRE(it != all.end());
        CHECK(it->subtitle_positions == e.subtitle_positions);
        CHECK(it->method == MatchMethod::Exact);
      }
      std::vector<int> used(b.size(), 0);
      std::size_t last = 0;
      for (const auto& m : all) {
        for (auto p : m.subtitle_positions) ++used[p];
        CHECK(m.subtitle_positions.front() >= last);
        last = m.subtitle_positions.back();
      }
      for (auto c : used) CHECK(c <= 1);
    }
  }
}
