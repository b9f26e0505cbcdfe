#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "eventdistill/corpus_store.hpp"
#include "eventdistill/sequence_generator.hpp"
#include "fixtures.hpp"

using namespace eventdistill;
using eventdistill::testing::small_catalog;

TEST(GenerateSequence, AlwaysOutOfVocabularyYieldsLengthOne) {
  ScriptedBackend b(Script::always("xyzzy"));
  auto s = generate_sequence("earthquake", small_catalog(), {}, b);
  EXPECT_EQ(s.labels, std::vector<std::string>{"earthquake"});
  EXPECT_EQ(s.termination, Termination::retries_exhausted);
  EXPECT_EQ(s.step_attempts, std::vector<int>{3});
}

TEST(GenerateSequence, StopsAtMaxLen) {
  ScriptedBackend b(Script{{"tsunami", "nuclear disaster"}, {}, {}});
  GeneratorConfig cfg;
  cfg.max_len = 3;
  auto s = generate_sequence("earthquake", small_catalog(), cfg, b);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"earthquake", "tsunami", "nuclear disaster"}));
  EXPECT_EQ(s.termination, Termination::max_len_reached);
  EXPECT_EQ(s.step_attempts, (std::vector<int>{1, 1}));
}

TEST(GenerateSequence, ConsecutiveRepeatBurnsRetries) {
  ScriptedBackend b(Script::always("tsunami"));
  auto s = generate_sequence("earthquake", small_catalog(), {}, b);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"earthquake", "tsunami"}));
  EXPECT_EQ(s.termination, Termination::retries_exhausted);
  EXPECT_EQ(s.step_attempts, (std::vector<int>{1, 3}));

  GeneratorConfig allow;
  allow.allow_consecutive_repeat = true;
  allow.max_len = 4;
  ScriptedBackend b2(Script::always("tsunami"));
  EXPECT_EQ(generate_sequence("earthquake", small_catalog(), allow, b2).labels.size(), 4u);
}

TEST(GenerateSequence, AppendsCanonicalTopClassLabel) {
  ScriptedBackend b(Script{{"  Armed Conflict.\nsomething else", "Food shortage"}, {}, {}});
  GeneratorConfig cfg;
  cfg.max_len = 3;
  auto s = generate_sequence("earthquake", small_catalog(), cfg, b);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"earthquake", "war", "famine"}));
}

TEST(GenerateSequence, IterativePromptCarriesHistory) {
  auto catalog = small_catalog();
  auto script = Script::parse(
      "what usually happens after earthquake\ttsunami\n"
      "what usually happens after earthquake and tsunami\tnuclear disaster\n");
  ScriptedBackend b(script);
  GeneratorConfig cfg;
  cfg.max_len = 3;
  auto s = generate_sequence("earthquake", catalog, cfg, b);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"earthquake", "tsunami", "nuclear disaster"}));
}

TEST(GenerateSequence, LaterGoodResponsesDoNotRescueExhaustedStep) {
  ScriptedBackend b(Script{{"tsunami", "bad", "worse", "nope", "famine", "war"}, {}, {}});
  auto s = generate_sequence("earthquake", small_catalog(), {}, b);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"earthquake", "tsunami"}));
  EXPECT_EQ(s.termination, Termination::retries_exhausted);
}

TEST(GenerateSequence, BackendErrorKeepsPartialSequence) {
  ScriptedBackend b(Script{{"tsunami", "xyzzy"}, {}, {}});
  auto s = generate_sequence("earthquake", small_catalog(), {}, b);
  EXPECT_EQ(s.labels, (std::vector<std::string>{"earthquake", "tsunami"}));
  EXPECT_EQ(s.termination, Termination::backend_error);
  EXPECT_EQ(s.step_attempts, (std::vector<int>{1, 2}));
}

TEST(GenerateSequence, UnknownTriggerRejected) {
  ScriptedBackend b(Script::always("war"));
  EXPECT_THROW(generate_sequence("xyzzy", small_catalog(), {}, b), UsageError);
}

TEST(GenerateCorpus, CountsAndOrder) {
  auto catalog = small_catalog();
  ScriptedBackend b(Script::always("war"));
  GeneratorConfig cfg;
  auto c = generate_corpus(catalog, cfg, b, std::vector<std::string>{"famine", "earthquake", "tsunami"});
  ASSERT_EQ(c.sequences.size(), 3u);
  EXPECT_EQ(c.sequences[0].trigger, "famine");
  EXPECT_EQ(c.sequences[2].trigger, "tsunami");
  EXPECT_EQ(c.catalog_digest, catalog.digest());

  EXPECT_TRUE(generate_corpus(catalog, cfg, b, std::vector<std::string>{}).sequences.empty());
}

TEST(GenerateCorpus, SamplesPerTriggerAndLogging) {
  ScriptedBackend b(Script::always("war"));
  GeneratorConfig cfg;
  cfg.samples_per_trigger = 3;
  std::ostringstream log;
  auto c = generate_corpus(small_catalog(), cfg, b, std::vector<std::string>{"famine", "tsunami"}, 1, &log);
  EXPECT_EQ(c.sequences.size(), 6u);
  EXPECT_NE(log.str().find("generated 6 sequences"), std::string::npos);
}

TEST(GenerateCorpus, ParallelMatchesSerialWithQuestionKeyedScript) {
  auto catalog = small_catalog();
  std::string text;
  for (const auto& t : catalog.vocabulary()) text += "what usually happens after " + t + "\tfamine\n";
  text += "*\twar\n";
  ScriptedBackend serial(Script::parse(text)), parallel(Script::parse(text));
  auto a = generate_corpus(catalog, {}, serial, std::nullopt, 1);
  auto b = generate_corpus(catalog, {}, parallel, std::nullopt, 4);
  EXPECT_EQ(serialize_corpus(a), serialize_corpus(b));
  EXPECT_EQ(a.sequences.size(), catalog.concept_labels().size());
}

TEST(CorpusStats, Arithmetic) {
  Corpus c;
  for (std::size_t len : {1, 3, 5}) {
    GeneratedSequence s;
    s.labels.assign(len, "war");
    c.sequences.push_back(s);
  }
  auto st = corpus_stats(c);
  EXPECT_EQ(st.count, 3u);
  EXPECT_DOUBLE_EQ(st.mean_len, 3.0);
  EXPECT_EQ(st.below_min_len, 1u);

  Corpus ones;
  ones.sequences.assign(8, GeneratedSequence{"famine", {"famine"}, Termination::retries_exhausted, {3}, "s"});
  auto st1 = corpus_stats(ones);
  EXPECT_EQ(st1.len_histogram.at(1), 8u);
  EXPECT_EQ(st1.termination_counts.at("retries_exhausted"), 8u);
}

// Random scripts mixing in-vocabulary labels, aliases, junk and repeats.
TEST(GenerationProperties, RandomizedScriptedRuns) {
  auto catalog = small_catalog();
  const auto vocab = catalog.vocabulary();
  std::vector<std::string> pool = vocab;
  for (const auto* s : {"xyzzy", "armed conflict", "food shortage", "  Tsunami.", "heat wave", "", "quake"}) pool.push_back(s);

  std::mt19937 rng(99);
  for (int run = 0; run < 200; ++run) {
    Script script;
    for (std::size_t i = 0, n = rng() % 40; i < n; ++i) script.responses.push_back(pool[rng() % pool.size()]);
    GeneratorConfig cfg;
    cfg.max_len = 1 + static_cast<int>(rng() % 10);
    cfg.min_len = 1;
    cfg.max_step_retries = 1 + static_cast<int>(rng() % 4);
    const auto trigger = vocab[rng() % vocab.size()];

    ScriptedBackend first(script), second(script);
    auto s = generate_sequence(trigger, catalog, cfg, first);
    auto again = generate_sequence(trigger, catalog, cfg, second);
    ASSERT_EQ(s, again);

    ASSERT_FALSE(s.labels.empty());
    EXPECT_EQ(s.labels.front(), trigger);
    EXPECT_LE(static_cast<int>(s.labels.size()), cfg.max_len);
    for (const auto& l : s.labels) EXPECT_NE(std::find(vocab.begin(), vocab.end(), l), vocab.end()) << l;
    for (auto a : s.step_attempts) {
      EXPECT_GE(a, 1);
      EXPECT_LE(a, cfg.max_step_retries);
    }
    if (s.termination == Termination::retries_exhausted) {
      EXPECT_EQ(s.step_attempts.back(), cfg.max_step_retries);
    }
    if (s.termination == Termination::max_len_reached) {
      EXPECT_EQ(static_cast<int>(s.labels.size()), cfg.max_len);
    }
  }
}
