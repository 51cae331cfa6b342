#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace storygraph::subtitles {

struct SubtitleBlock {
  int index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<std::string> lines;

  bool operator==(const SubtitleBlock&) const = default;
};

struct SrtParseResult {
  std::vector<SubtitleBlock> blocks;
  std::vector<std::string> warnings;
};

// Parses SubRip bytes (UTF-8, with or without BOM, or latin-1). Formatting
// tags are stripped from text lines. Blocks are returned in timeline order;
// when the file's numbering disagrees with that order they are renumbered
// 1..n and a warning is recorded.
SrtParseResult parse_srt(std::string_view bytes);

std::string subtitle_text(const SubtitleBlock& block);

std::string format_timestamp(std::int64_t ms);                 // HH:MM:SS,mmm
std::int64_t parse_timestamp(std::string_view text);           // throws ParseError
std::string write_srt(const std::vector<SubtitleBlock>& blocks);

// Removes <...> and {...} formatting tags.
std::string strip_tags(std::string_view line);

// Decodes latin-1 to UTF-8 when the input is not valid UTF-8; drops a UTF-8 BOM.
std::string to_utf8(std::string_view bytes);

}  // namespace storygraph::subtitles
