#include "storygraph/subtitles.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "storygraph/error.hpp"

namespace storygraph::subtitles {
namespace {

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    i += len;
  }
  return true;
}

bool is_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string where(int block, std::size_t line) {
  return "block " + std::to_string(block) + " (line " + std::to_string(line) + ")";
}

}  // namespace

std::string to_utf8(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (valid_utf8(bytes)) return std::string(bytes);
  std::string out;
  out.reserve(bytes.size() + bytes.size() / 8);
  for (char ch : bytes) {
    auto c = static_cast<unsigned char>(ch);
    if (c < 0x80) {
      out.push_back(ch);
    } else {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

std::string strip_tags(std::string_view line) {
  std::string out;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '<' || c == '{') {
      char close = c == '<' ? '>' : '}';
      auto end = line.find(close, i + 1);
      if (end != std::string_view::npos) {
        i = end;
        continue;
      }
    }
    out.push_back(c);
  }
  return out;
}

std::int64_t parse_timestamp(std::string_view text) {
  text = trim(text);
  int h = 0, m = 0, s = 0, ms = 0;
  char sep = 0;
  int consumed = 0;
  std::string buf(text);
  if (std::sscanf(buf.c_str(), "%d:%2d:%2d%c%3d%n", &h, &m, &s, &sep, &ms, &consumed) != 5 ||
      static_cast<std::size_t>(consumed) != buf.size() || (sep != ',' && sep != '.') || h < 0 || m < 0 ||
      m > 59 || s < 0 || s > 59 || ms < 0) {
    throw ParseError("malformed timestamp '" + buf + "'");
  }
  // "1,5" means 500 ms: the fraction is decimal.
  auto frac = buf.substr(buf.find(sep) + 1);
  if (frac.size() == 1) ms *= 100;
  if (frac.size() == 2) ms *= 10;
  return ((static_cast<std::int64_t>(h) * 60 + m) * 60 + s) * 1000 + ms;
}

std::string format_timestamp(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(ms / 3600000),
                static_cast<long long>((ms / 60000) % 60), static_cast<long long>((ms / 1000) % 60),
                static_cast<long long>(ms % 1000));
  return buf;
}

SrtParseResult parse_srt(std::string_view bytes) {
  const std::string text = to_utf8(bytes);
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
      if (nl == std::string::npos) break;
      pos = nl + 1;
    }
  }

  SrtParseResult result;
  std::size_t i = 0;
  int ordinal = 0;
  while (i < lines.size()) {
    if (trim(lines[i]).empty()) {
      ++i;
      continue;
    }
    ++ordinal;
    SubtitleBlock block;
    std::string_view first = trim(lines[i]);
    std::size_t ts_line = i;
    if (is_integer(first)) {
      block.index = std::stoi(std::string(first));
      ts_line = i + 1;
    } else {
      block.index = ordinal;
      result.warnings.push_back(where(ordinal, i + 1) + ": missing index line");
    }
    if (ts_line >= lines.size()) throw ParseError(where(block.index, ts_line + 1) + ": missing timestamp line");
    std::string_view ts = trim(lines[ts_line]);
    auto arrow = ts.find("-->");
    if (arrow == std::string_view::npos)
      throw ParseError(where(block.index, ts_line + 1) + ": malformed timestamp line '" + std::string(ts) + "'");
    std::string_view end_part = trim(ts.substr(arrow + 3));
    // drop trailing position hints such as "X1:100 X2:200"
    if (auto sp = end_part.find_first_of(" \t"); sp != std::string_view::npos) end_part = end_part.substr(0, sp);
    try {
      block.start_ms = parse_timestamp(ts.substr(0, arrow));
      block.end_ms = parse_timestamp(end_part);
    } catch (const ParseError& e) {
      throw ParseError(where(block.index, ts_line + 1) + ": " + e.what());
    }
    if (block.start_ms >= block.end_ms)
      throw ParseError(where(block.index, ts_line + 1) + ": start " + format_timestamp(block.start_ms) +
                       " is not before end " + format_timestamp(block.end_ms));
    i = ts_line + 1;
    while (i < lines.size() && !trim(lines[i]).empty()) {
      std::string stripped(trim(strip_tags(lines[i])));
      if (!stripped.empty()) block.lines.push_back(std::move(stripped));
      ++i;
    }
    result.blocks.push_back(std::move(block));
  }

  auto& blocks = result.blocks;
  bool ordered = true;
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    if (blocks[k].index <= blocks[k - 1].index || blocks[k].start_ms < blocks[k - 1].start_ms) ordered = false;
  }
  if (!ordered) {
    result.warnings.push_back("subtitle indices out of timeline order; blocks reindexed");
    std::stable_sort(blocks.begin(), blocks.end(),
                     [](const SubtitleBlock& a, const SubtitleBlock& b) { return a.start_ms < b.start_ms; });
    for (std::size_t k = 0; k < blocks.size(); ++k) blocks[k].index = static_cast<int>(k + 1);
  }
  for (std::size_t k = 1; k < blocks.size(); ++k) {
    if (blocks[k].start_ms < blocks[k - 1].end_ms)
      result.warnings.push_back("block " + std::to_string(blocks[k].index) + " overlaps block " +
                                std::to_string(blocks[k - 1].index));
  }
  return result;
}

std::string subtitle_text(const SubtitleBlock& block) {
  std::string out;
  for (const auto& raw : block.lines) {
    std::string line = strip_tags(raw);
    std::string_view v = trim(line);
    while (!v.empty() && (v.front() == '-' || v.front() == ' ')) v.remove_prefix(1);
    if (v.empty()) continue;
    for (char c : v) {
      bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
      if (space) {
        if (!out.empty() && out.back() != ' ') out.push_back(' ');
      } else {
        out.push_back(c);
      }
    }
    if (!out.empty() && out.back() != ' ') out.push_back(' ');
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string write_srt(const std::vector<SubtitleBlock>& blocks) {
  std::string out;
  for (const auto& b : blocks) {
    out += std::to_string(b.index) + "\n";
    out += format_timestamp(b.start_ms) + " --> " + format_timestamp(b.end_ms) + "\n";
    for (const auto& l : b.lines) out += l + "\n";
    out += "\n";
  }
  return out;
}

}  // namespace storygraph::subtitles
