#pragma once
// Iterative next-event generation. Each step prompts the backend with the
// history so far, resolves the reply against the catalog vocabulary, and
// retries a bounded number of times before giving up on the sequence.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "eventdistill/concept_catalog.hpp"
#include "eventdistill/error.hpp"
#include "eventdistill/generation_backend.hpp"
#include "eventdistill/prompt_forge.hpp"

namespace eventdistill {

struct GeneratorConfig {
  int min_len = 3;  // recorded; short sequences are kept and counted
  int max_len = 10;
  int max_step_retries = 3;
  bool allow_consecutive_repeat = false;
  int samples_per_trigger = 1;
  SamplingParams sampling;

  void validate() const {
    if (min_len < 1) throw UsageError("min_len must be positive");
    if (max_len < 1) throw UsageError("max_len must be positive");
    if (min_len > max_len) throw UsageError("min_len must not exceed max_len");
    if (max_step_retries < 1) throw UsageError("max_step_retries must be at least 1");
    if (samples_per_trigger < 1) throw UsageError("samples_per_trigger must be positive");
    sampling.validate();
  }

  bool operator==(const GeneratorConfig&) const = default;
};

enum class Termination { max_len_reached, retries_exhausted, backend_error };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::max_len_reached: return "max_len_reached";
    case Termination::retries_exhausted: return "retries_exhausted";
    case Termination::backend_error: return "backend_error";
  }
  return "backend_error";
}

inline std::optional<Termination> parse_termination(std::string_view s) {
  if (s == "max_len_reached") return Termination::max_len_reached;
  if (s == "retries_exhausted") return Termination::retries_exhausted;
  if (s == "backend_error") return Termination::backend_error;
  return std::nullopt;
}

struct GeneratedSequence {
  std::string trigger;
  std::vector<std::string> labels;  // labels[0] is the trigger
  Termination termination = Termination::max_len_reached;
  std::vector<int> step_attempts;
  std::string backend_id;

  bool operator==(const GeneratedSequence&) const = default;
};

struct Corpus {
  std::vector<GeneratedSequence> sequences;
  std::string catalog_digest;
  GeneratorConfig config;

  bool operator==(const Corpus&) const = default;
};

namespace detail {

inline std::string_view first_nonblank_line(std::string_view text) {
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) return line;
    start = end + 1;
  }
  return {};
}

}  // namespace detail

/// Runs the generation loop for one trigger. Backend failures end the
/// sequence with termination=backend_error and keep what was generated.
inline GeneratedSequence generate_sequence(const std::string& trigger, const ConceptCatalog& catalog,
                                           const GeneratorConfig& cfg, Backend& backend) {
  if (!catalog.resolve_label(trigger)) throw UsageError("trigger '" + trigger + "' is not in the catalog");
  const auto vocab = catalog.vocabulary();

  GeneratedSequence seq;
  seq.trigger = trigger;
  seq.labels.push_back(trigger);
  seq.backend_id = backend.id();

  while (static_cast<int>(seq.labels.size()) < cfg.max_len) {
    const auto prompt = seq.labels.size() == 1 ? build_trigger_prompt(vocab, trigger)
                                               : build_iterative_prompt(vocab, seq.labels);
    std::optional<std::string> accepted;
    int attempts = 0;
    while (attempts < cfg.max_step_retries && !accepted) {
      ++attempts;
      Completion reply;
      try {
        reply = backend.complete(prompt, cfg.sampling);
      } catch (const BackendError&) {
        seq.step_attempts.push_back(attempts);
        seq.termination = Termination::backend_error;
        return seq;
      }
      auto label = catalog.resolve_vocabulary_label(detail::first_nonblank_line(reply.text));
      if (!label) continue;
      if (!cfg.allow_consecutive_repeat && normalize_label(*label) == normalize_label(seq.labels.back())) continue;
      accepted = std::move(label);
    }
    seq.step_attempts.push_back(attempts);
    if (!accepted) {
      seq.termination = Termination::retries_exhausted;
      return seq;
    }
    seq.labels.push_back(std::move(*accepted));
  }
  seq.termination = Termination::max_len_reached;
  return seq;
}

/// One sequence per (trigger, sample), in trigger order. With jobs > 1 the
/// triggers run concurrently but the output order is unchanged.
inline Corpus generate_corpus(const ConceptCatalog& catalog, const GeneratorConfig& cfg, Backend& backend,
                              std::optional<std::vector<std::string>> triggers = std::nullopt, int jobs = 1,
                              std::ostream* log = nullptr) {
  cfg.validate();
  auto trigger_list = triggers ? std::move(*triggers) : catalog.concept_labels();
  for (const auto& t : trigger_list) {
    if (!catalog.resolve_label(t)) throw UsageError("trigger '" + t + "' is not in the catalog");
  }

  std::vector<std::string> work;
  for (const auto& t : trigger_list) {
    for (int s = 0; s < cfg.samples_per_trigger; ++s) work.push_back(t);
  }

  Corpus corpus;
  corpus.catalog_digest = catalog.digest();
  corpus.config = cfg;
  corpus.sequences.resize(work.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      corpus.sequences[i] = generate_sequence(work[i], catalog, cfg, backend);
    }
  };
  if (jobs <= 1 || work.size() < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < std::min<int>(jobs, static_cast<int>(work.size())); ++j) pool.emplace_back(worker);
  }

  if (log) {
    std::size_t failed = 0, short_seqs = 0;
    for (const auto& s : corpus.sequences) {
      failed += s.termination == Termination::backend_error;
      short_seqs += static_cast<int>(s.labels.size()) < cfg.min_len;
    }
    *log << "generated " << corpus.sequences.size() << " sequences from " << trigger_list.size() << " triggers; "
         << failed << " backend failures; " << short_seqs << " shorter than " << cfg.min_len << "\n";
  }
  return corpus;
}

struct CorpusStats {
  std::size_t count = 0;
  double mean_len = 0;
  std::map<std::size_t, std::size_t> len_histogram;
  std::map<std::string, std::size_t> termination_counts;
  std::map<std::string, std::size_t> label_frequencies;
  std::size_t below_min_len = 0;
};

inline CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats st;
  st.count = corpus.sequences.size();
  std::size_t total = 0;
  for (const auto& s : corpus.sequences) {
    total += s.labels.size();
    ++st.len_histogram[s.labels.size()];
    ++st.termination_counts[std::string(to_string(s.termination))];
    for (const auto& l : s.labels) ++st.label_frequencies[l];
    st.below_min_len += static_cast<int>(s.labels.size()) < corpus.config.min_len;
  }
  st.mean_len = st.count ? static_cast<double>(total) / static_cast<double>(st.count) : 0.0;
  return st;
}

}  // namespace eventdistill
