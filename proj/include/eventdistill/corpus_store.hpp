#pragma once
// Corpus files and deterministic train/dev/test splits.
//
// A corpus file is one JSON object per line: a header
//   {"catalog_digest":...,"config":{...},"kind":"header"}
// followed by one record per sequence
//   {"backend_id":...,"labels":[...],"step_attempts":[...],"termination":...,"trigger":...}
// Keys are written in sorted order so save(load(save(c))) is byte-identical.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "eventdistill/concept_catalog.hpp"
#include "eventdistill/error.hpp"
#include "eventdistill/io.hpp"
#include "eventdistill/sequence_generator.hpp"

namespace eventdistill {

inline json to_json(const GeneratorConfig& c) {
  return {{"min_len", c.min_len},
          {"max_len", c.max_len},
          {"max_step_retries", c.max_step_retries},
          {"allow_consecutive_repeat", c.allow_consecutive_repeat},
          {"samples_per_trigger", c.samples_per_trigger},
          {"sampling", to_json(c.sampling)}};
}

inline GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig c;
  c.min_len = j.value("min_len", c.min_len);
  c.max_len = j.value("max_len", c.max_len);
  c.max_step_retries = j.value("max_step_retries", c.max_step_retries);
  c.allow_consecutive_repeat = j.value("allow_consecutive_repeat", c.allow_consecutive_repeat);
  c.samples_per_trigger = j.value("samples_per_trigger", c.samples_per_trigger);
  if (auto it = j.find("sampling"); it != j.end()) c.sampling = sampling_from_json(*it);
  return c;
}

inline json to_json(const GeneratedSequence& s) {
  return {{"trigger", s.trigger},
          {"labels", s.labels},
          {"termination", std::string(to_string(s.termination))},
          {"step_attempts", s.step_attempts},
          {"backend_id", s.backend_id}};
}

inline std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  json header = {{"kind", "header"}, {"catalog_digest", corpus.catalog_digest}, {"config", to_json(corpus.config)}};
  out.append(header.dump()).push_back('\n');
  for (const auto& s : corpus.sequences) out.append(to_json(s).dump()).push_back('\n');
  return out;
}

inline Corpus parse_corpus(std::string_view text) {
  Corpus corpus;
  bool seen_header = false;
  for (const auto& rec : parse_json_lines(text)) {
    if (optional_field<std::string>(rec, "kind", "") == "header") {
      if (seen_header || !corpus.sequences.empty()) throw ParseError(rec.line_number, "header must be the first record");
      seen_header = true;
      corpus.catalog_digest = optional_field<std::string>(rec, "catalog_digest", "");
      try {
        corpus.config = generator_config_from_json(rec.value.value("config", json::object()));
      } catch (const json::exception&) {
        throw ParseError(rec.line_number, "malformed config");
      }
      continue;
    }
    GeneratedSequence s;
    s.trigger = required_field<std::string>(rec, "trigger");
    s.labels = required_field<std::vector<std::string>>(rec, "labels");
    auto term = required_field<std::string>(rec, "termination");
    auto parsed = parse_termination(term);
    if (!parsed) throw ParseError(rec.line_number, "unknown termination '" + term + "'");
    s.termination = *parsed;
    s.step_attempts = optional_field<std::vector<int>>(rec, "step_attempts", {});
    s.backend_id = optional_field<std::string>(rec, "backend_id", "");
    if (s.labels.empty()) throw ParseError(rec.line_number, "sequence has no labels");
    if (s.labels.front() != s.trigger) throw ParseError(rec.line_number, "first label differs from the trigger");
    corpus.sequences.push_back(std::move(s));
  }
  return corpus;
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_corpus(corpus));
}

inline Corpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

/// False when the corpus was generated against a different catalog.
inline bool digest_matches(const Corpus& corpus, const ConceptCatalog& catalog) {
  return corpus.catalog_digest == catalog.digest();
}

/// xorshift64* seeded through one splitmix64 step.
///
///   state = splitmix64(seed); if state == 0: state = 0x9E3779B97F4A7C15
///   next: x ^= x >> 12; x ^= x << 25; x ^= x >> 27; state = x
///         return x * 0x2545F4914F6CDD1D   (mod 2^64)
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    state_ = z ^ (z >> 31);
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;
  }

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1DULL;
  }

  // Not bias-free; chosen for a portable, one-line definition.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

struct SplitSpec {
  double train = 0.70;
  double dev = 0.15;
  double test = 0.15;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(train > 0 && dev > 0 && test > 0)) throw UsageError("split fractions must be positive");
    if (std::abs(train + dev + test - 1.0) > 1e-9) throw UsageError("split fractions must sum to 1");
  }
};

struct SplitIndices {
  std::vector<std::size_t> train, dev, test;

  bool operator==(const SplitIndices&) const = default;
};

/// Fisher-Yates over 0..n-1 (i from n-1 down to 1, j = next() % (i+1)),
/// then dev = round(n*dev), test = round(n*test) rounding halves up, and
/// train takes the remainder. Dev and test are carved from the front of the
/// permutation after train; each part is reported in ascending order.
inline SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  spec.validate();
  if (n == 0) throw DataError("cannot split an empty corpus");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  XorShift64Star rng(spec.seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);

  auto round_half_up = [](double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); };
  std::size_t n_test = std::min(n, round_half_up(static_cast<double>(n) * spec.test));
  std::size_t n_dev = std::min(n - n_test, round_half_up(static_cast<double>(n) * spec.dev));
  std::size_t n_train = n - n_dev - n_test;

  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.dev.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                 perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev));
  out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_dev), perm.end());
  for (auto* part : {&out.train, &out.dev, &out.test}) std::sort(part->begin(), part->end());
  return out;
}

struct CorpusSplit {
  Corpus train, dev, test;
};

inline CorpusSplit split(const Corpus& corpus, const SplitSpec& spec) {
  auto idx = split_indices(corpus.sequences.size(), spec);
  CorpusSplit out{corpus, corpus, corpus};
  auto take = [&](Corpus& part, const std::vector<std::size_t>& ids) {
    part.sequences.clear();
    for (auto i : ids) part.sequences.push_back(corpus.sequences[i]);
  };
  take(out.train, idx.train);
  take(out.dev, idx.dev);
  take(out.test, idx.test);
  return out;
}

inline std::string split_manifest(const SplitIndices& idx, const SplitSpec& spec) {
  json j = {{"seed", spec.seed},
            {"fractions", {{"train", spec.train}, {"dev", spec.dev}, {"test", spec.test}}},
            {"train", idx.train},
            {"dev", idx.dev},
            {"test", idx.test}};
  return j.dump() + "\n";
}

}  // namespace eventdistill
