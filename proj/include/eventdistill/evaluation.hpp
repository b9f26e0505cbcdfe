#pragma once
// Corpus quality metrics. Recall compares adjacent generated pairs against
// the catalog's causal reference; precision asks an evaluator model to
// judge each adjacent pair YES/NO.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "eventdistill/concept_catalog.hpp"
#include "eventdistill/error.hpp"
#include "eventdistill/generation_backend.hpp"
#include "eventdistill/io.hpp"
#include "eventdistill/prompt_forge.hpp"
#include "eventdistill/sequence_generator.hpp"

namespace eventdistill {

using LabelPair = std::pair<std::string, std::string>;

/// Every (labels[i], labels[i+1]) of every sequence, duplicates kept.
inline std::vector<LabelPair> adjacent_pairs(const Corpus& corpus) {
  std::vector<LabelPair> out;
  for (const auto& s : corpus.sequences) {
    for (std::size_t i = 0; i + 1 < s.labels.size(); ++i) out.emplace_back(s.labels[i], s.labels[i + 1]);
  }
  return out;
}

inline double f1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

struct PairJudgment {
  std::string trigger;
  std::string consequence;
  Verdict verdict = Verdict::unparseable;
  std::string justification;
  std::string evaluator_id;

  bool operator==(const PairJudgment&) const = default;
};

// Judgments keyed by (trigger, consequence, evaluator_id). File format: one
// {consequence, evaluator_id, justification, trigger, verdict} per line.
class JudgmentCache {
 public:
  using Key = std::tuple<std::string, std::string, std::string>;

  JudgmentCache() = default;
  JudgmentCache(JudgmentCache&& other) noexcept : entries_(std::move(other.entries_)) {}
  JudgmentCache& operator=(JudgmentCache&& other) noexcept {
    if (this != &other) {
      std::scoped_lock lock(mu_, other.mu_);
      entries_ = std::move(other.entries_);
    }
    return *this;
  }

  std::optional<PairJudgment> find(const std::string& trigger, const std::string& consequence,
                                   const std::string& evaluator_id) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find({trigger, consequence, evaluator_id});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(PairJudgment j) {
    std::lock_guard lock(mu_);
    Key k{j.trigger, j.consequence, j.evaluator_id};
    entries_[std::move(k)] = std::move(j);
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
  }

  std::string serialize() const {
    std::lock_guard lock(mu_);
    std::string out;
    for (const auto& [k, j] : entries_) {
      json rec = {{"trigger", j.trigger},
                  {"consequence", j.consequence},
                  {"verdict", std::string(to_string(j.verdict))},
                  {"justification", j.justification},
                  {"evaluator_id", j.evaluator_id}};
      out.append(rec.dump()).push_back('\n');
    }
    return out;
  }

  static JudgmentCache parse(std::string_view text) {
    JudgmentCache cache;
    for (const auto& rec : parse_json_lines(text)) {
      PairJudgment j;
      j.trigger = required_field<std::string>(rec, "trigger");
      j.consequence = required_field<std::string>(rec, "consequence");
      auto v = required_field<std::string>(rec, "verdict");
      auto parsed = parse_verdict(v);
      if (!parsed) throw ParseError(rec.line_number, "unknown verdict '" + v + "'");
      j.verdict = *parsed;
      j.justification = optional_field<std::string>(rec, "justification", "");
      j.evaluator_id = required_field<std::string>(rec, "evaluator_id");
      cache.put(std::move(j));
    }
    return cache;
  }

  static JudgmentCache load(const std::filesystem::path& path) { return parse(read_file(path)); }

  void save(const std::filesystem::path& path) const { write_file_atomic(path, serialize()); }

 private:
  mutable std::mutex mu_;
  std::map<Key, PairJudgment> entries_;
};

struct PrecisionConfig {
  bool strict = false;  // count unparseable verdicts as NO
  int jobs = 1;
  SamplingParams sampling;
};

struct PrecisionResult {
  double precision = 0;
  std::size_t pairs = 0;  // adjacent pairs in the corpus, with multiplicity
  std::size_t yes = 0;
  std::size_t no = 0;
  std::size_t unparseable = 0;
  std::size_t failed = 0;  // pairs whose judgment hit a backend error
  double completeness = 1;
  std::vector<std::string> errors;
};

/// Judges each distinct adjacent pair once (consulting `cache` when given)
/// and weights verdicts by pair multiplicity. precision = yes / (yes + no).
inline PrecisionResult precision(const Corpus& corpus, Backend& evaluator, const PrecisionConfig& cfg = {},
                                 JudgmentCache* cache = nullptr) {
  const auto pairs = adjacent_pairs(corpus);
  if (pairs.empty()) throw DataError("no judgeable pairs");

  std::map<LabelPair, std::size_t> multiplicity;
  for (const auto& p : pairs) ++multiplicity[p];
  std::vector<LabelPair> distinct;
  for (const auto& [p, n] : multiplicity) distinct.push_back(p);

  const auto evaluator_id = evaluator.id();
  std::vector<std::optional<PairJudgment>> judged(distinct.size());
  std::vector<std::string> errors(distinct.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < distinct.size(); i = next++) {
      const auto& [t, c] = distinct[i];
      if (cache) {
        if (auto hit = cache->find(t, c, evaluator_id)) {
          judged[i] = std::move(hit);
          continue;
        }
      }
      try {
        auto reply = evaluator.complete(build_precision_prompt(t, c), cfg.sampling);
        auto parsed = parse_yes_no(reply);
        judged[i] = PairJudgment{t, c, parsed.verdict, std::move(parsed.justification), evaluator_id};
        if (cache) cache->put(*judged[i]);
      } catch (const BackendError& e) {
        errors[i] = t + " -> " + c + ": " + e.what();
      }
    }
  };
  if (cfg.jobs <= 1 || distinct.size() < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < std::min<int>(cfg.jobs, static_cast<int>(distinct.size())); ++j) pool.emplace_back(worker);
  }

  PrecisionResult r;
  r.pairs = pairs.size();
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    const auto n = multiplicity[distinct[i]];
    if (!judged[i]) {
      r.failed += n;
      r.errors.push_back(std::move(errors[i]));
      continue;
    }
    switch (judged[i]->verdict) {
      case Verdict::yes: r.yes += n; break;
      case Verdict::no: r.no += n; break;
      case Verdict::unparseable: r.unparseable += n; break;
    }
  }
  const auto negatives = r.no + (cfg.strict ? r.unparseable : 0);
  r.precision = r.yes + negatives > 0 ? static_cast<double>(r.yes) / static_cast<double>(r.yes + negatives) : 0.0;
  r.completeness = static_cast<double>(r.pairs - r.failed) / static_cast<double>(r.pairs);
  return r;
}

struct RecallResult {
  double recall = 0;
  std::size_t reference_pairs = 0;  // unordered, both ends in the vocabulary
  std::size_t matched = 0;
  std::size_t unattainable = 0;  // reference pairs with an end outside the vocabulary
};

/// Share of unordered reference pairs {a, b} for which (a, b) or (b, a)
/// appears adjacently in some sequence. Labels are resolved to concept ids.
inline RecallResult recall(const Corpus& corpus, const ConceptCatalog& catalog, const CausalReference& reference) {
  std::set<IdPair> unordered;
  for (const auto& [a, b] : reference.pairs) unordered.insert(a < b ? IdPair{a, b} : IdPair{b, a});
  if (unordered.empty()) throw DataError("empty causal reference");

  std::set<IdPair> seen;
  for (const auto& [x, y] : adjacent_pairs(corpus)) {
    auto a = catalog.resolve_label(x), b = catalog.resolve_label(y);
    if (!a || !b || *a == *b) continue;
    seen.insert(*a < *b ? IdPair{*a, *b} : IdPair{*b, *a});
  }

  RecallResult r;
  r.reference_pairs = unordered.size();
  r.unattainable = reference.dropped;
  for (const auto& p : unordered) r.matched += seen.count(p);
  r.recall = static_cast<double>(r.matched) / static_cast<double>(r.reference_pairs);
  return r;
}

inline RecallResult recall(const Corpus& corpus, const ConceptCatalog& catalog) {
  return recall(corpus, catalog, catalog.causal_reference());
}

struct MetricsReport {
  std::optional<PrecisionResult> precision;
  std::optional<RecallResult> recall;

  double f1_score() const {
    return f1(precision ? precision->precision : 0.0, recall ? recall->recall : 0.0);
  }

  json to_json() const {
    json j = json::object();
    if (precision) {
      j["precision"] = precision->precision;
      j["pairs"] = precision->pairs;
      j["yes"] = precision->yes;
      j["no"] = precision->no;
      j["unparseable"] = precision->unparseable;
      j["failed"] = precision->failed;
      j["completeness"] = precision->completeness;
    }
    if (recall) {
      j["recall"] = recall->recall;
      j["reference_pairs"] = recall->reference_pairs;
      j["matched"] = recall->matched;
      j["unattainable"] = recall->unattainable;
    }
    if (precision && recall) j["f1"] = f1_score();
    return j;
  }

  /// "key: value" lines; fractions at two decimals.
  std::string to_text() const {
    std::string out;
    auto kv = [&out](const char* k, const std::string& v) { out.append(k).append(": ").append(v).push_back('\n'); };
    auto frac = [](double v) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", v);
      return std::string(buf);
    };
    if (precision) {
      kv("precision", frac(precision->precision));
      kv("pairs", std::to_string(precision->pairs));
      kv("yes", std::to_string(precision->yes));
      kv("no", std::to_string(precision->no));
      kv("unparseable", std::to_string(precision->unparseable));
      kv("failed", std::to_string(precision->failed));
      kv("completeness", frac(precision->completeness));
    }
    if (recall) {
      kv("recall", frac(recall->recall));
      kv("reference_pairs", std::to_string(recall->reference_pairs));
      kv("matched", std::to_string(recall->matched));
      kv("unattainable", std::to_string(recall->unattainable));
    }
    if (precision && recall) kv("f1", frac(f1_score()));
    return out;
  }
};

}  // namespace eventdistill
