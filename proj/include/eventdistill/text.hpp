#pragma once
// String helpers shared across the pipeline: label normalization, digests,
// and small split/join utilities.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eventdistill {

namespace detail {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_punct(char c) {
  auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u) != 0;
}

}  // namespace detail

/// Canonical lookup key for a label.
///
/// Lowercases ASCII, collapses whitespace runs to one space, trims, and strips
/// leading/trailing ASCII punctuation. A trailing ')' that closes a '(' in the
/// label is kept so "conflict (psychological)" survives verbatim.
inline std::string normalize_label(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (detail::is_ascii_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    auto u = static_cast<unsigned char>(c);
    out.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
  }

  std::size_t begin = 0;
  std::size_t end = out.size();
  for (;;) {
    bool changed = false;
    while (begin < end && (detail::is_ascii_punct(out[begin]) || out[begin] == ' ')) {
      ++begin;
      changed = true;
    }
    while (end > begin && (detail::is_ascii_punct(out[end - 1]) || out[end - 1] == ' ')) {
      if (out[end - 1] == ')' &&
          out.find('(', begin) < end - 1) {
        break;
      }
      --end;
      changed = true;
    }
    if (!changed) break;
  }
  return out.substr(begin, end - begin);
}

/// "conflict (psychological)" -> "conflict". Empty when there is no
/// parenthetical suffix.
inline std::optional<std::string> strip_parenthetical(std::string_view normalized) {
  if (normalized.empty() || normalized.back() != ')') return std::nullopt;
  auto open = normalized.rfind(" (");
  if (open == std::string_view::npos || open == 0) return std::nullopt;
  auto base = normalize_label(normalized.substr(0, open));
  if (base.empty()) return std::nullopt;
  return base;
}

// 64-bit FNV-1a.
class Fnv1a {
 public:
  Fnv1a& update(std::string_view bytes) {
    for (char c : bytes) {
      hash_ ^= static_cast<unsigned char>(c);
      hash_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  // Appends a field separator that cannot occur in UTF-8 text.
  Fnv1a& field(std::string_view bytes) {
    update(bytes);
    hash_ ^= 0xffU;
    hash_ *= 0x100000001b3ULL;
    return *this;
  }

  std::uint64_t value() const { return hash_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && detail::is_ascii_space(text[b])) ++b;
  while (e > b && detail::is_ascii_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

}  // namespace eventdistill
