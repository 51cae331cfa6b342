#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "storygraph/error.hpp"
#include "storygraph/subtitles.hpp"

using namespace storygraph;
using namespace storygraph::subtitles;

TEST_SUITE("subtitles") {
  TEST_CASE("single block") {
    auto r = parse_srt("1\n00:00:01,000 --> 00:00:02,500\nHello\n");
    REQUIRE(r.blocks.size() == 1);
    CHECK(r.blocks[0].index == 1);
    CHECK(r.blocks[0].start_ms == 1000);
    CHECK(r.blocks[0].end_ms == 2500);
    CHECK(r.blocks[0].lines == std::vector<std::string>{"Hello"});
    CHECK(r.warnings.empty());
  }

  TEST_CASE("one millisecond block is valid") {
    auto r = parse_srt("1\n00:00:00,000 --> 00:00:00,001\nx\n");
    REQUIRE(r.blocks.size() == 1);
    CHECK(r.blocks[0].end_ms - r.blocks[0].start_ms == 1);
  }

  TEST_CASE("start not before end is an error naming the block") {
    try {
      parse_srt("1\n00:00:01,000 --> 00:00:02,000\na\n\n7\n00:00:05,000 --> 00:00:05,000\nb\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("7") != std::string::npos);
    }
  }

  TEST_CASE("malformed timestamp") {
    CHECK_THROWS_AS(parse_srt("1\n00:00:0x,000 --> 00:00:02,000\na\n"), ParseError);
    CHECK_THROWS_AS(parse_timestamp("1:2"), ParseError);
  }

  TEST_CASE("lenient variants") {
    auto r = parse_srt("\xEF\xBB\xBF" "1\r\n00:00:01.000 --> 00:00:02.000 X1:10 X2:20\r\n<i>Hi</i> {y:i}there\r\n\r\n");
    REQUIRE(r.blocks.size() == 1);
    CHECK(r.blocks[0].start_ms == 1000);
    CHECK(subtitle_text(r.blocks[0]) == "Hi there");
    auto latin = parse_srt("1\n00:00:01,000 --> 00:00:02,000\nCaf\xE9\n");
    CHECK(latin.blocks[0].lines[0] == "Caf\xC3\xA9");
  }

  TEST_CASE("out of order indices are reindexed with a warning") {
    auto r = parse_srt("2\n00:00:05,000 --> 00:00:06,000\nsecond\n\n1\n00:00:01,000 --> 00:00:02,000\nfirst\n");
    REQUIRE(r.blocks.size() == 2);
    CHECK(r.blocks[0].lines[0] == "first");
    CHECK(r.blocks[0].index == 1);
    CHECK(r.blocks[1].index == 2);
    CHECK_FALSE(r.warnings.empty());
  }

  TEST_CASE("overlap only warns") {
    auto r = parse_srt("1\n00:00:01,000 --> 00:00:03,000\na\n\n2\n00:00:02,000 --> 00:00:04,000\nb\n");
    CHECK(r.blocks.size() == 2);
    CHECK(r.warnings.size() == 1);
  }

  TEST_CASE("subtitle text") {
    SubtitleBlock b;
    b.lines = {"- Hi.", "- Hello."};
    CHECK(subtitle_text(b) == "Hi. Hello.");
    b.lines = {"<i>Help</i>"};
    CHECK(subtitle_text(b) == "Help");
    b.lines = {};
    CHECK(subtitle_text(b) == "");
  }

  TEST_CASE("timestamps") {
    CHECK(format_timestamp(0) == "00:00:00,000");
    CHECK(format_timestamp(3723004) == "01:02:03,004");
    CHECK(parse_timestamp("01:02:03,004") == 3723004);
  }

  TEST_CASE("write then parse round-trips") {
    auto r = parse_srt(read_fixture("sample.srt"));
    CHECK(r.blocks.size() == 10);
    CHECK(parse_srt(write_srt(r.blocks)).blocks == r.blocks);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<SubtitleBlock> blocks;
      std::int64_t t = 0;
      for (int i = 1; i <= 20; ++i) {
        SubtitleBlock b;
        b.index = i;
        t += static_cast<std::int64_t>(rng() % 5000);
        b.start_ms = t;
        t += 1 + static_cast<std::int64_t>(rng() % 4000);
        b.end_ms = t;
        b.lines = {"line " + std::to_string(rng() % 1000)};
        if (rng() % 2) b.lines.push_back("second part");
        blocks.push_back(b);
      }
      auto back = parse_srt(write_srt(blocks));
      CHECK(back.blocks == blocks);
      for (std::size_t i = 1; i < back.blocks.size(); ++i) CHECK(back.blocks[i - 1].start_ms <= back.blocks[i].start_ms);
    }
  }
}
