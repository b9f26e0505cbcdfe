#pragma once
// Frequent sequential pattern mining over sequences of single event labels.
//
// Support is the number of database sequences containing a pattern as an
// order-preserving, not necessarily contiguous subsequence; a sequence
// contributes at most once. No gap or window constraints.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "eventdistill/error.hpp"
#include "eventdistill/sequence_generator.hpp"

namespace eventdistill {

using LabelId = std::uint32_t;
using Pattern = std::vector<LabelId>;

/// Label sequences with labels interned as ids. The alphabet is sorted, so
/// comparing id vectors lexicographically orders patterns by label text.
struct SequenceDatabase {
  std::vector<std::vector<LabelId>> sequences;
  std::vector<std::string> alphabet;

  static SequenceDatabase from_labels(const std::vector<std::vector<std::string>>& seqs,
                                      std::vector<std::string> extra_alphabet = {}) {
    std::set<std::string> labels(extra_alphabet.begin(), extra_alphabet.end());
    for (const auto& s : seqs) labels.insert(s.begin(), s.end());
    SequenceDatabase db;
    db.alphabet.assign(labels.begin(), labels.end());
    for (const auto& s : seqs) {
      std::vector<LabelId> ids;
      ids.reserve(s.size());
      for (const auto& l : s) ids.push_back(*db.find(l));
      db.sequences.push_back(std::move(ids));
    }
    return db;
  }

  static SequenceDatabase from_corpus(const Corpus& corpus) {
    std::vector<std::vector<std::string>> seqs;
    seqs.reserve(corpus.sequences.size());
    for (const auto& s : corpus.sequences) seqs.push_back(s.labels);
    return from_labels(seqs);
  }

  std::optional<LabelId> find(const std::string& label) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), label);
    if (it == alphabet.end() || *it != label) return std::nullopt;
    return static_cast<LabelId>(it - alphabet.begin());
  }

  std::vector<std::string> labels_of(const Pattern& p) const {
    std::vector<std::string> out;
    for (auto id : p) out.push_back(alphabet.at(id));
    return out;
  }

  std::size_t positions() const {
    std::size_t n = 0;
    for (const auto& s : sequences) n += s.size();
    return n;
  }
};

struct SequentialPattern {
  Pattern labels;
  std::size_t support = 0;

  auto operator<=>(const SequentialPattern&) const = default;
};

/// True iff alpha can be embedded in beta preserving order.
template <typename T>
bool is_subsequence(std::span<const T> alpha, std::span<const T> beta) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < beta.size() && i < alpha.size(); ++j) {
    if (alpha[i] == beta[j]) ++i;
  }
  return i == alpha.size();
}

template <typename T>
bool is_subsequence(const std::vector<T>& alpha, const std::vector<T>& beta) {
  return is_subsequence(std::span<const T>(alpha), std::span<const T>(beta));
}

struct MineOptions {
  std::size_t min_sup = 1;
  std::size_t max_len = 0;  // 0 = unbounded
};

/// Absolute threshold from a relative one, rounding up (and never below 1).
inline std::size_t min_support_from_fraction(double fraction, std::size_t db_size) {
  if (!(fraction > 0 && fraction <= 1)) throw UsageError("relative min support must lie in (0, 1]");
  auto s = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(db_size) - 1e-12));
  return std::max<std::size_t>(s, 1);
}

namespace detail {

inline void check_min_sup(std::size_t min_sup) {
  if (min_sup == 0) throw UsageError("min_sup must be at least 1");
}

// Canonical order: by length, then lexicographic.
inline void sort_canonical(std::vector<SequentialPattern>& out) {
  std::sort(out.begin(), out.end(), [](const SequentialPattern& a, const SequentialPattern& b) {
    if (a.labels.size() != b.labels.size()) return a.labels.size() < b.labels.size();
    return a.labels < b.labels;
  });
}

inline std::vector<std::size_t> item_support(const SequenceDatabase& db) {
  std::vector<std::size_t> support(db.alphabet.size(), 0);
  std::vector<char> seen(db.alphabet.size());
  for (const auto& s : db.sequences) {
    std::fill(seen.begin(), seen.end(), 0);
    for (auto id : s) {
      if (!seen[id]) {
        seen[id] = 1;
        ++support[id];
      }
    }
  }
  return support;
}

}  // namespace detail

/// Level-wise apriori mining. Candidates of length k join two frequent
/// (k-1)-patterns p, q with p[1..] == q[..k-2], giving p + q.back(); a
/// candidate survives only if every one-element deletion is frequent.
inline std::vector<SequentialPattern> gsp(const SequenceDatabase& db, MineOptions opt) {
  detail::check_min_sup(opt.min_sup);
  std::vector<SequentialPattern> out;
  if (db.sequences.empty()) return out;

  std::set<Pattern> level;
  auto singles = detail::item_support(db);
  for (LabelId id = 0; id < singles.size(); ++id) {
    if (singles[id] >= opt.min_sup) {
      level.insert(Pattern{id});
      out.push_back({Pattern{id}, singles[id]});
    }
  }

  for (std::size_t k = 2; !level.empty() && (opt.max_len == 0 || k <= opt.max_len); ++k) {
    std::map<Pattern, std::vector<const Pattern*>> by_prefix;
    for (const auto& q : level) by_prefix[Pattern(q.begin(), q.end() - 1)].push_back(&q);

    std::vector<Pattern> candidates;
    for (const auto& p : level) {
      auto it = by_prefix.find(Pattern(p.begin() + 1, p.end()));
      if (it == by_prefix.end()) continue;
      for (const auto* q : it->second) {
        Pattern c = p;
        c.push_back(q->back());
        bool all_frequent = true;
        for (std::size_t drop = 0; drop < c.size() && all_frequent; ++drop) {
          Pattern sub;
          for (std::size_t i = 0; i < c.size(); ++i)
            if (i != drop) sub.push_back(c[i]);
          all_frequent = level.count(sub) > 0;
        }
        if (all_frequent) candidates.push_back(std::move(c));
      }
    }

    std::vector<std::size_t> counts(candidates.size(), 0);
    for (const auto& s : db.sequences) {
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (is_subsequence(candidates[c], s)) ++counts[c];
      }
    }

    std::set<Pattern> next;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (counts[c] >= opt.min_sup) {
        out.push_back({candidates[c], counts[c]});
        next.insert(std::move(candidates[c]));
      }
    }
    level = std::move(next);
  }
  detail::sort_canonical(out);
  return out;
}

namespace detail {

struct Occurrence {
  std::uint32_t sid;
  std::uint32_t pos;
};

using IdList = std::vector<Occurrence>;  // sorted by (sid, pos)

inline std::size_t idlist_support(const IdList& list) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < list.size(); ++i) n += (i == 0 || list[i].sid != list[i - 1].sid);
  return n;
}

// Occurrences of P+b (from right = id-list of P+b) that have an occurrence
// of P+a (left) strictly earlier in the same sequence: the id-list of P+a+b.
inline IdList temporal_join(const IdList& left, const IdList& right) {
  IdList out;
  std::size_t i = 0;
  for (std::size_t j = 0; j < right.size();) {
    auto sid = right[j].sid;
    while (i < left.size() && left[i].sid < sid) ++i;
    if (i < left.size() && left[i].sid == sid) {
      auto earliest = left[i].pos;
      for (; j < right.size() && right[j].sid == sid; ++j) {
        if (right[j].pos > earliest) out.push_back(right[j]);
      }
    } else {
      while (j < right.size() && right[j].sid == sid) ++j;
    }
  }
  return out;
}

struct Atom {
  LabelId item;
  IdList list;
};

inline void spade_dfs(Pattern& prefix, const std::vector<Atom>& atoms, const MineOptions& opt,
                      std::vector<SequentialPattern>& out) {
  for (const auto& a : atoms) {
    prefix.push_back(a.item);
    out.push_back({prefix, idlist_support(a.list)});
    if (opt.max_len == 0 || prefix.size() < opt.max_len) {
      std::vector<Atom> children;
      for (const auto& b : atoms) {
        auto joined = temporal_join(a.list, b.list);
        if (idlist_support(joined) >= opt.min_sup) children.push_back({b.item, std::move(joined)});
      }
      if (!children.empty()) spade_dfs(prefix, children, opt, out);
    }
    prefix.pop_back();
  }
}

}  // namespace detail

/// Vertical-format mining: per-label id-lists of (sequence, position), grown
/// depth-first inside prefix equivalence classes by temporal joins of
/// sibling id-lists.
inline std::vector<SequentialPattern> spade(const SequenceDatabase& db, MineOptions opt) {
  detail::check_min_sup(opt.min_sup);
  std::vector<SequentialPattern> out;
  std::vector<detail::IdList> lists(db.alphabet.size());
  for (std::uint32_t sid = 0; sid < db.sequences.size(); ++sid) {
    const auto& s = db.sequences[sid];
    for (std::uint32_t pos = 0; pos < s.size(); ++pos) lists[s[pos]].push_back({sid, pos});
  }
  std::vector<detail::Atom> atoms;
  for (LabelId id = 0; id < lists.size(); ++id) {
    if (detail::idlist_support(lists[id]) >= opt.min_sup) atoms.push_back({id, std::move(lists[id])});
  }
  Pattern prefix;
  detail::spade_dfs(prefix, atoms, opt, out);
  detail::sort_canonical(out);
  return out;
}

inline constexpr double kBruteForceCandidateCap = 5e6;

/// Testing oracle: every label tuple of length 1..max_len over the alphabet,
/// support counted directly.
inline std::vector<SequentialPattern> brute_force_mine(const SequenceDatabase& db, std::size_t min_sup,
                                                       std::size_t max_len) {
  detail::check_min_sup(min_sup);
  if (max_len == 0) throw UsageError("brute force mining needs a positive max_len");
  const auto a = static_cast<double>(db.alphabet.size());
  double total = 0;
  for (std::size_t l = 1; l <= max_len; ++l) total += std::pow(a, static_cast<double>(l));
  if (total > kBruteForceCandidateCap) {
    throw DataError("brute force enumeration of " + std::to_string(static_cast<long long>(total)) +
                    " candidates exceeds the cap");
  }

  std::vector<SequentialPattern> out;
  if (db.alphabet.empty()) return out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    Pattern tuple(len, 0);
    for (;;) {
      std::size_t support = 0;
      for (const auto& s : db.sequences) {
        std::size_t matched = 0;
        for (auto id : s)
          if (matched < len && id == tuple[matched]) ++matched;
        support += matched == len;
      }
      if (support >= min_sup) out.push_back({tuple, support});

      std::size_t d = len;
      while (d > 0 && ++tuple[d - 1] == db.alphabet.size()) tuple[--d] = 0;
      if (d == 0) break;
    }
  }
  detail::sort_canonical(out);
  return out;
}

/// TSV report: "a -> b -> c<TAB>support", sorted by descending support, then
/// length, then label order.
inline std::string pattern_report(const SequenceDatabase& db, std::vector<SequentialPattern> patterns) {
  std::sort(patterns.begin(), patterns.end(), [](const SequentialPattern& a, const SequentialPattern& b) {
    if (a.support != b.support) return a.support > b.support;
    if (a.labels.size() != b.labels.size()) return a.labels.size() < b.labels.size();
    return a.labels < b.labels;
  });
  std::string out;
  for (const auto& p : patterns) {
    out.append(join(db.labels_of(p.labels), " -> "));
    out.push_back('\t');
    out.append(std::to_string(p.support));
    out.push_back('\n');
  }
  return out;
}

}  // namespace eventdistill
