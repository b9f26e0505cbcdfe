#pragma once
// Command-line driver: eventdistill <subcommand> [flags]
//
// Exit status: 0 success, 2 usage error, 3 data error, 4 backend error.
// A flat "key = value" config file (--config) supplies defaults for the
// chosen subcommand's flags; explicit flags win.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eventdistill/concept_catalog.hpp"
#include "eventdistill/corpus_store.hpp"
#include "eventdistill/error.hpp"
#include "eventdistill/evaluation.hpp"
#include "eventdistill/generation_backend.hpp"
#include "eventdistill/io.hpp"
#include "eventdistill/pattern_miner.hpp"
#include "eventdistill/sequence_generator.hpp"
#include "eventdistill/summ_models.hpp"

namespace eventdistill::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitBackend = 4;

enum class LogLevel { error, warn, info, debug };

class Log {
 public:
  Log(std::ostream& sink, LogLevel level) : sink_(sink), level_(level) {}
  void warn(const std::string& m) const { emit(LogLevel::warn, "warning: ", m); }
  void info(const std::string& m) const { emit(LogLevel::info, "", m); }
  void debug(const std::string& m) const { emit(LogLevel::debug, "debug: ", m); }

 private:
  void emit(LogLevel at, const char* prefix, const std::string& m) const {
    if (static_cast<int>(level_) >= static_cast<int>(at)) sink_ << prefix << m << "\n";
  }
  std::ostream& sink_;
  LogLevel level_;
};

struct BackendFlags {
  std::string kind = "scripted";
  std::string script;
  std::string endpoint;
  std::string model_name;
  std::string protocol = "completion";
  double timeout = 60.0;
  int transport_retries = 2;

  void add_to(CLI::App* sub) {
    sub->add_option("--backend", kind, "Backend kind")->check(CLI::IsMember({"scripted", "http"}));
    sub->add_option("--script", script, "Scripted responses file, or a .jsonl transcript to replay (scripted backend)")->check(CLI::ExistingFile);
    sub->add_option("--endpoint", endpoint, "Completion endpoint URL (http backend)");
    sub->add_option("--model-name", model_name, "Model name sent with each request");
    sub->add_option("--protocol", protocol, "Wire protocol")->check(CLI::IsMember({"completion", "chat"}));
    sub->add_option("--timeout", timeout, "Request timeout in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--transport-retries", transport_retries, "Transport retries per request")
        ->check(CLI::NonNegativeNumber);
  }

  BackendConfig config() const {
    BackendConfig c;
    c.kind = kind == "http" ? BackendKind::http : BackendKind::scripted;
    c.endpoint_url = endpoint;
    c.model_name = model_name;
    c.protocol = protocol == "chat" ? WireProtocol::chat : WireProtocol::completion;
    c.timeout_seconds = timeout;
    c.max_retries_transport = transport_retries;
    if (c.kind == BackendKind::scripted) {
      if (script.empty()) throw UsageError("--backend scripted requires --script");
      c.script = std::filesystem::path(script).extension() == ".jsonl" ? Script::from_transcript(script)
                                                                       : Script::load(script);
    }
    return c;
  }
};

struct SamplingFlags {
  SamplingParams params;

  void add_to(CLI::App* sub) {
    sub->add_option("--top-k", params.top_k, "Top-k sampling")->check(CLI::PositiveNumber);
    sub->add_option("--top-p", params.top_p, "Top-p (nucleus) sampling")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--max-new-tokens", params.max_new_tokens, "Generated tokens per request")
        ->check(CLI::PositiveNumber);
    sub->add_option("--temperature", params.temperature, "Sampling temperature")->check(CLI::NonNegativeNumber);
  }
};

namespace detail {

inline std::map<std::string, std::string> read_flat_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '[') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected key = value");
    auto key = trim(t.substr(0, eq));
    auto value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    out[key] = value;
  }
  return out;
}

inline bool mentions(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args)
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& part : split(s, ',')) {
    auto t = trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

inline std::string format_double(double v, int precision = 6) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << std::fixed << v;
  return ss.str();
}

inline SequenceDatabase database_for(const Corpus& c) { return SequenceDatabase::from_corpus(c); }

inline LabelSet resolve_interest(const SequenceDatabase& db, const std::vector<std::string>& names) {
  if (names.empty()) {
    LabelSet all(db.alphabet.size());
    for (LabelId i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  LabelSet ids;
  for (const auto& n : names) {
    auto id = db.find(n);
    if (!id) throw DataError("interest label '" + n + "' does not occur in the corpus");
    ids.push_back(*id);
  }
  return make_label_set(ids);
}

}  // namespace detail

/// Builds the parser. Exposed so tests can golden-check the help text.
struct App {
  CLI::App app{"Distill event-sequence knowledge from generative language models.", "eventdistill"};

  std::string config_path;
  std::string log_level = "info";

  CLI::App* ingest = nullptr;
  CLI::App* generate = nullptr;
  CLI::App* stats = nullptr;
  CLI::App* mine = nullptr;
  CLI::App* learn = nullptr;
  CLI::App* eval = nullptr;
  CLI::App* split_cmd = nullptr;
  CLI::App* simulate_cmd = nullptr;

  // ingest
  std::string catalog;
  std::string vocab_out;
  // generate
  std::string out;
  std::string triggers;
  std::string triggers_file;
  std::string transcript;
  GeneratorConfig gen;
  int jobs = 1;
  BackendFlags backend;
  SamplingFlags sampling;
  // stats / mine / learn / eval / split / simulate
  std::string corpus;
  std::string algo = "gsp";
  std::size_t min_sup = 5;
  double min_sup_frac = 0;
  std::size_t max_pattern_len = 0;
  std::string kind = "bsumm";
  SummConfig summ;
  std::vector<std::string> interest;
  std::optional<std::uint64_t> split_seed;
  int baseline_order = 4;
  bool strict = false;
  std::string judgments;
  std::string json_out;
  std::optional<std::uint64_t> seed;
  SplitSpec split_spec;
  std::string out_dir;
  std::string model;
  std::string background;
  std::size_t n_sequences = 1000;
  std::size_t seq_len = 10;

  App() {
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
    app.add_option("--config", config_path, "Flat key = value file supplying flag defaults");
    app.add_option("--log-level", log_level, "Logging verbosity")
        ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

    ingest = app.add_subcommand("ingest", "Load a catalog export and report its contents");
    ingest->add_option("--catalog", catalog, "Catalog file")->required()->check(CLI::ExistingFile);
    ingest->add_option("--vocab-out", vocab_out, "Write the generation vocabulary, one label per line");

    generate = app.add_subcommand("generate", "Generate an event-sequence corpus");
    generate->add_option("--catalog", catalog, "Catalog file")->required()->check(CLI::ExistingFile);
    generate->add_option("--out", out, "Corpus output file")->required();
    generate->add_option("--triggers", triggers, "Comma-separated trigger labels (default: every concept)");
    generate->add_option("--triggers-file", triggers_file, "Trigger labels, one per line")->check(CLI::ExistingFile);
    generate->add_option("--samples-per-trigger", gen.samples_per_trigger, "Sequences per trigger")
        ->check(CLI::PositiveNumber);
    generate->add_option("--min-len", gen.min_len, "Desired minimum length (reported, not enforced)")
        ->check(CLI::PositiveNumber);
    generate->add_option("--max-len", gen.max_len, "Maximum sequence length")->check(CLI::PositiveNumber);
    generate->add_option("--retries", gen.max_step_retries, "Attempts per step before giving up")
        ->check(CLI::PositiveNumber);
    generate->add_flag("--allow-repeat", gen.allow_consecutive_repeat, "Accept a label equal to the previous one");
    generate->add_option("--jobs", jobs, "Concurrent triggers")->check(CLI::PositiveNumber);
    generate->add_option("--transcript", transcript, "Record prompts and completions to this file");
    backend.add_to(generate);
    sampling.add_to(generate);

    stats = app.add_subcommand("stats", "Summarize a corpus");
    stats->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    stats->add_option("--catalog", catalog, "Catalog to check the corpus digest against")
        ->check(CLI::ExistingFile);

    mine = app.add_subcommand("mine", "Mine frequent sequential patterns");
    mine->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    mine->add_option("--algo", algo, "Mining algorithm")->check(CLI::IsMember({"gsp", "spade", "brute"}));
    mine->add_option("--min-sup", min_sup, "Absolute minimum support")->check(CLI::PositiveNumber);
    mine->add_option("--min-sup-frac", min_sup_frac, "Relative minimum support (overrides --min-sup)")
        ->check(CLI::Range(0.0, 1.0));
    mine->add_option("--max-len", max_pattern_len, "Longest pattern to report (0 = unbounded)");
    mine->add_option("--out", out, "Pattern report (TSV)")->required();

    learn = app.add_subcommand("learn", "Learn a summary Markov model for interest labels");
    learn->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    learn->add_option("--kind", kind, "Model kind")->check(CLI::IsMember({"bsumm", "osumm"}));
    learn->add_option("--kappa", summ.kappa, "Lookback window in events")->check(CLI::PositiveNumber);
    learn->add_option("--alpha", summ.alpha, "Smoothing pseudocount")->check(CLI::PositiveNumber);
    learn->add_option("--gamma", summ.gamma, "Structure penalty weight")->check(CLI::NonNegativeNumber);
    learn->add_option("--interest", interest, "Interest label (repeatable; default: every label)");
    learn->add_option("--split-seed", split_seed, "Train on the train split and report test log loss");
    learn->add_option("--train", split_spec.train, "Train fraction when splitting");
    learn->add_option("--dev", split_spec.dev, "Dev fraction when splitting");
    learn->add_option("--test", split_spec.test, "Test fraction when splitting");
    learn->add_option("--baseline-order", baseline_order, "Markov baseline order for the comparison")
        ->check(CLI::PositiveNumber);
    learn->add_option("--out", out, "Model output file")->required();

    eval = app.add_subcommand("eval", "Score a corpus: recall against the catalog, precision via an evaluator");
    eval->add_option("--catalog", catalog, "Catalog file")->required()->check(CLI::ExistingFile);
    eval->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    eval->add_flag("--strict", strict, "Count unparseable verdicts as NO");
    eval->add_option("--judgments", judgments, "Judgment cache file (read if present, then updated)");
    eval->add_option("--jobs", jobs, "Concurrent evaluator requests")->check(CLI::PositiveNumber);
    eval->add_option("--json-out", json_out, "Machine-readable metrics output");
    eval->add_option("--out", out, "Metrics report (key: value text)");
    backend.add_to(eval);
    sampling.add_to(eval);

    split_cmd = app.add_subcommand("split", "Deterministic train/dev/test split of a corpus");
    split_cmd->add_option("--corpus", corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    split_cmd->add_option("--seed", seed, "Shuffle seed (required)");
    split_cmd->add_option("--train", split_spec.train, "Train fraction");
    split_cmd->add_option("--dev", split_spec.dev, "Dev fraction");
    split_cmd->add_option("--test", split_spec.test, "Test fraction");
    split_cmd->add_option("--out-dir", out_dir, "Directory for train/dev/test corpora and manifest")->required();

    simulate_cmd = app.add_subcommand("simulate", "Sample a synthetic corpus from a planted model");
    simulate_cmd->add_option("--model", model, "Planted model file")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_option("--background", background, "Background labels: a,b,c or a=0.5,b=0.5")->required();
    simulate_cmd->add_option("--n", n_sequences, "Number of sequences")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--len", seq_len, "Sequence length")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", seed, "Sampling seed (required)");
    simulate_cmd->add_option("--out", out, "Corpus output file")->required();
  }

  // Appends "--key value" for config entries the user did not pass and the
  // chosen subcommand understands.
  std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    CLI::App* chosen = nullptr;
    for (const auto& a : args) {
      for (auto* sub : app.get_subcommands({})) {
        if (sub->get_name() == a) chosen = sub;
      }
      if (chosen) break;
    }
    if (!chosen) return args;
    for (const auto& [key, value] : detail::read_flat_config(path)) {
      const std::string flag = "--" + key;
      if (detail::mentions(args, flag)) continue;
      const CLI::Option* opt = chosen->get_option_no_throw(flag);
      if (!opt) opt = app.get_option_no_throw(flag);
      if (!opt || key == "config") continue;
      if (opt->get_type_size() == 0) {
        if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
      } else {
        args.push_back(flag);
        args.push_back(value);
      }
    }
    return args;
  }
};

namespace detail {

inline int run_ingest(App& a, std::ostream& out, const Log&) {
  auto cat = ConceptCatalog::load(a.catalog);
  auto st = cat.stats();
  auto ref = cat.causal_reference();
  out << "top_classes: " << st.top_classes << "\n"
      << "concepts: " << st.concepts << "\n"
      << "labels: " << st.labels << "\n"
      << "causal_pairs: " << st.causal_pairs << "\n"
      << "reference_pairs: " << ref.pairs.size() / 2 << "\n"
      << "reference_dropped: " << ref.dropped << "\n"
      << "digest: " << cat.digest() << "\n";
  if (!a.vocab_out.empty()) {
    std::string text;
    for (const auto& l : cat.vocabulary()) text.append(l).push_back('\n');
    write_file_atomic(a.vocab_out, text);
  }
  return kExitOk;
}

inline int run_generate(App& a, std::ostream& out, const Log& log) {
  auto cat = ConceptCatalog::load(a.catalog);
  a.gen.sampling = a.sampling.params;
  a.gen.validate();
  std::optional<std::vector<std::string>> triggers;
  if (!a.triggers.empty()) triggers = split_list(a.triggers);
  if (!a.triggers_file.empty()) {
    std::vector<std::string> list;
    for (auto& l : split(read_file(a.triggers_file), '\n')) {
      auto t = trim(l);
      if (!t.empty()) list.push_back(std::move(t));
    }
    if (triggers) list.insert(list.begin(), triggers->begin(), triggers->end());
    triggers = std::move(list);
  }

  auto inner = make_backend(a.backend.config());
  std::unique_ptr<TranscriptRecorder> recorder;
  Backend* backend = inner.get();
  if (!a.transcript.empty()) {
    recorder = std::make_unique<TranscriptRecorder>(*inner);
    backend = recorder.get();
  }

  std::ostringstream progress;
  auto corpus = generate_corpus(cat, a.gen, *backend, triggers, a.jobs, &progress);
  log.info(trim(progress.str()));
  save_corpus(corpus, a.out);
  if (recorder) write_file_atomic(a.transcript, recorder->transcript());

  std::size_t failed = 0;
  for (const auto& s : corpus.sequences) failed += s.termination == Termination::backend_error;
  out << "sequences: " << corpus.sequences.size() << "\n";
  if (!corpus.sequences.empty() && failed == corpus.sequences.size()) {
    log.warn("every sequence ended in a backend error");
    return kExitBackend;
  }
  return kExitOk;
}

inline int run_stats(App& a, std::ostream& out, const Log& log) {
  auto corpus = load_corpus(a.corpus);
  if (!a.catalog.empty() && !digest_matches(corpus, ConceptCatalog::load(a.catalog))) {
    log.warn("corpus catalog digest differs from " + a.catalog);
  }
  auto st = corpus_stats(corpus);
  out << "count: " << st.count << "\n"
      << "mean_len: " << format_double(st.mean_len, 4) << "\n"
      << "below_min_len: " << st.below_min_len << "\n";
  for (const auto& [len, n] : st.len_histogram) out << "len[" << len << "]: " << n << "\n";
  for (const auto& [t, n] : st.termination_counts) out << "termination[" << t << "]: " << n << "\n";
  for (const auto& [l, n] : st.label_frequencies) out << "label[" << l << "]: " << n << "\n";
  return kExitOk;
}

inline int run_mine(App& a, std::ostream& out, const Log& log) {
  auto db = database_for(load_corpus(a.corpus));
  MineOptions opt{a.min_sup, a.max_pattern_len};
  if (a.min_sup_frac > 0) opt.min_sup = min_support_from_fraction(a.min_sup_frac, db.sequences.size());
  std::vector<SequentialPattern> patterns;
  if (a.algo == "gsp") {
    patterns = gsp(db, opt);
  } else if (a.algo == "spade") {
    patterns = spade(db, opt);
  } else {
    if (opt.max_len == 0) throw UsageError("--algo brute requires --max-len");
    patterns = brute_force_mine(db, opt.min_sup, opt.max_len);
  }
  write_file_atomic(a.out, pattern_report(db, patterns));
  log.info("min_sup " + std::to_string(opt.min_sup) + " over " + std::to_string(db.sequences.size()) + " sequences");
  out << "patterns: " << patterns.size() << "\n";
  return kExitOk;
}

inline int run_learn(App& a, std::ostream& out, const Log& log) {
  auto corpus = load_corpus(a.corpus);
  a.summ.kind = a.kind == "osumm" ? SummaryKind::ordinal : SummaryKind::binary;
  a.summ.validate();
  auto full = database_for(corpus);

  SequenceDatabase train = full, test;
  if (a.split_seed) {
    SplitSpec spec = a.split_spec;
    spec.seed = *a.split_seed;
    auto parts = split(corpus, spec);
    // Intern every part against the full alphabet so ids agree.
    auto labels_of = [](const Corpus& c) {
      std::vector<std::vector<std::string>> s;
      for (const auto& q : c.sequences) s.push_back(q.labels);
      return s;
    };
    train = SequenceDatabase::from_labels(labels_of(parts.train), full.alphabet);
    test = SequenceDatabase::from_labels(labels_of(parts.test), full.alphabet);
  }
  auto interest_ids = resolve_interest(full, a.interest);

  LearnTrace trace;
  auto m = learn(train, interest_ids, a.summ, &trace);
  for (const auto& [step, s] : trace.steps) log.debug(step + " score " + format_double(s));
  save_model(m, a.out);

  out << "kind: " << a.kind << "\n"
      << "interest: " << join(m.label_names(m.interest), ", ") << "\n"
      << "influencing: " << join(m.label_names(m.influencing), ", ") << "\n"
      << "score: " << format_double(score(m)) << "\n";
  const auto& eval_db = a.split_seed ? test : train;
  auto loss = log_loss(m, eval_db);
  const char* which = a.split_seed ? "test" : "train";
  out << which << "_log_loss_mean: " << format_double(loss.mean) << "\n"
      << which << "_log_likelihood: " << format_double(loss.total_log_likelihood) << "\n";
  if (a.split_seed) {
    auto chain = markov_baseline(train, a.baseline_order, a.summ.alpha);
    auto base = chain.log_loss(test, m.interest);
    out << "markov" << a.baseline_order << "_test_log_loss_mean: " << format_double(base.mean) << "\n";
  }
  return kExitOk;
}

inline int run_eval(App& a, std::ostream& out, const Log& log) {
  auto cat = ConceptCatalog::load(a.catalog);
  auto corpus = load_corpus(a.corpus);
  if (!digest_matches(corpus, cat)) log.warn("corpus catalog digest differs from " + a.catalog);

  MetricsReport report;
  report.recall = recall(corpus, cat);

  const bool want_precision = !a.backend.script.empty() || a.backend.kind == "http";
  if (want_precision) {
    auto backend = make_backend(a.backend.config());
    JudgmentCache cache;
    if (!a.judgments.empty() && std::filesystem::exists(a.judgments)) cache = JudgmentCache::load(a.judgments);
    PrecisionConfig pc;
    pc.strict = a.strict;
    pc.jobs = a.jobs;
    pc.sampling = a.sampling.params;
    report.precision = precision(corpus, *backend, pc, &cache);
    if (!a.judgments.empty()) cache.save(a.judgments);
    for (const auto& e : report.precision->errors) log.warn(e);
  }

  auto text = report.to_text();
  out << text;
  if (!a.out.empty()) write_file_atomic(a.out, text);
  if (!a.json_out.empty()) write_file_atomic(a.json_out, report.to_json().dump(2) + "\n");
  if (report.precision && report.precision->failed == report.precision->pairs) return kExitBackend;
  return kExitOk;
}

inline int run_split(App& a, std::ostream& out, const Log&) {
  if (!a.seed) throw UsageError("split requires --seed");
  auto corpus = load_corpus(a.corpus);
  auto spec = a.split_spec;
  spec.seed = *a.seed;
  auto idx = split_indices(corpus.sequences.size(), spec);
  auto parts = split(corpus, spec);
  std::filesystem::create_directories(a.out_dir);
  std::filesystem::path dir(a.out_dir);
  save_corpus(parts.train, dir / "train.jsonl");
  save_corpus(parts.dev, dir / "dev.jsonl");
  save_corpus(parts.test, dir / "test.jsonl");
  write_file_atomic(dir / "manifest.json", split_manifest(idx, spec));
  out << "train: " << idx.train.size() << "\n"
      << "dev: " << idx.dev.size() << "\n"
      << "test: " << idx.test.size() << "\n";
  return kExitOk;
}

inline int run_simulate(App& a, std::ostream& out, const Log&) {
  if (!a.seed) throw UsageError("simulate requires --seed");
  auto planted = load_model(a.model);
  std::vector<std::pair<LabelId, double>> background;
  for (const auto& item : split_list(a.background)) {
    auto eq = item.find('=');
    auto name = trim(item.substr(0, eq));
    double w = 1.0;
    if (eq != std::string::npos) {
      try {
        w = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw UsageError("bad background weight in '" + item + "'");
      }
    }
    auto it = std::lower_bound(planted.alphabet.begin(), planted.alphabet.end(), name);
    if (it == planted.alphabet.end() || *it != name) throw DataError("background label '" + name + "' not in the model alphabet");
    background.emplace_back(static_cast<LabelId>(it - planted.alphabet.begin()), w);
  }
  auto db = simulate(planted, background, a.n_sequences, a.seq_len, *a.seed);

  Corpus corpus;
  corpus.config.max_len = static_cast<int>(a.seq_len);
  corpus.config.min_len = std::min(corpus.config.min_len, corpus.config.max_len);
  for (const auto& s : db.sequences) {
    GeneratedSequence g;
    g.labels = db.labels_of(s);
    g.trigger = g.labels.front();
    g.termination = Termination::max_len_reached;
    g.step_attempts.assign(s.size() - 1, 1);
    g.backend_id = "simulate:seed=" + std::to_string(*a.seed);
    corpus.sequences.push_back(std::move(g));
  }
  save_corpus(corpus, a.out);
  out << "sequences: " << corpus.sequences.size() << "\n";
  return kExitOk;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  App a;
  try {
    args = a.merge_config(std::move(args));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<const char*> argv{"eventdistill"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    a.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = a.app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto level = a.log_level == "error"  ? LogLevel::error
               : a.log_level == "warn" ? LogLevel::warn
               : a.log_level == "debug" ? LogLevel::debug
                                        : LogLevel::info;
  Log log(err, level);
  try {
    if (a.ingest->parsed()) return detail::run_ingest(a, out, log);
    if (a.generate->parsed()) return detail::run_generate(a, out, log);
    if (a.stats->parsed()) return detail::run_stats(a, out, log);
    if (a.mine->parsed()) return detail::run_mine(a, out, log);
    if (a.learn->parsed()) return detail::run_learn(a, out, log);
    if (a.eval->parsed()) return detail::run_eval(a, out, log);
    if (a.split_cmd->parsed()) return detail::run_split(a, out, log);
    if (a.simulate_cmd->parsed()) return detail::run_simulate(a, out, log);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.category()) {
      case ErrorCategory::usage: return kExitUsage;
      case ErrorCategory::data: return kExitData;
      case ErrorCategory::backend: return kExitBackend;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace eventdistill::cli
