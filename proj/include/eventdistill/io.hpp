#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eventdistill/error.hpp"

namespace eventdistill {

using json = nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temp file and renames it over the target, so readers
/// never observe a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot rename into " + path.string());
  }
}

struct JsonLine {
  std::size_t line_number;
  json value;
};

/// Parses one JSON object per line. Blank lines are skipped; a line that is
/// not a JSON object raises ParseError with its line number. A final line
/// lacking its newline is still parsed, so a truncated record fails at that
/// line rather than silently disappearing.
inline std::vector<JsonLine> parse_json_lines(std::string_view text) {
  std::vector<JsonLine> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("malformed record: ") + e.what());
    }
    if (!value.is_object()) throw ParseError(line_no, "record is not an object");
    out.push_back({line_no, std::move(value)});
  }
  return out;
}

// Typed field access with line-numbered errors.
template <typename T>
T required_field(const JsonLine& rec, const char* key) {
  auto it = rec.value.find(key);
  if (it == rec.value.end()) {
    throw ParseError(rec.line_number, std::string("missing field '") + key + "'");
  }
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    throw ParseError(rec.line_number, std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T optional_field(const JsonLine& rec, const char* key, T fallback) {
  auto it = rec.value.find(key);
  if (it == rec.value.end() || it->is_null()) return fallback;
  try {
    return it->template get<T>();
  } catch (const json::exception&) {
    throw ParseError(rec.line_number, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace eventdistill
