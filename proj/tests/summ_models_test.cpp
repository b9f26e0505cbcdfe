#include <gtest/gtest.h>

#include <cmath>

#include "eventdistill/summ_models.hpp"
#include "fixtures.hpp"

using namespace eventdistill;

namespace {

SummConfig config(int kappa, SummaryKind kind = SummaryKind::binary, double gamma = 0.5) {
  SummConfig c;
  c.kappa = kappa;
  c.kind = kind;
  c.gamma = gamma;
  return c;
}

LabelId id(const SequenceDatabase& db, const std::string& l) { return *db.find(l); }

// Planted BSuMM: x follows u in the window with 0.9, else 0.05. Background
// labels a, b, c, d, u are uniform.
SummModel planted_model(SummaryKind kind = SummaryKind::binary) {
  std::vector<std::string> alphabet{"a", "b", "c", "d", "u", "x"};
  std::map<HistorySummary, std::vector<double>> thetas;
  if (kind == SummaryKind::binary) {
    thetas[{kind, {0}}] = {0.05};
    thetas[{kind, {1}}] = {0.9};
  } else {
    thetas[{kind, {}}] = {0.05};
    thetas[{kind, {0}}] = {0.9};
  }
  return SummModel::planted(alphabet, {5}, {4}, config(4, kind), thetas);
}

const std::vector<std::pair<LabelId, double>> kBackground{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}};

// Log-likelihood straight from the definition, recounting every cell.
double direct_log_likelihood(const SequenceDatabase& db, LabelId x, const LabelSet& u, const SummConfig& cfg) {
  std::map<HistorySummary, std::pair<double, double>> cells;  // h -> (n(h), n(x,h))
  for (const auto& s : db.sequences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto& c = cells[summarize(std::span<const LabelId>(s).first(i), u, cfg)];
      c.first += 1;
      c.second += s[i] == x;
    }
  }
  double ll = 0;
  for (const auto& [h, c] : cells) {
    double theta = (c.second + cfg.alpha) / (c.first + 2 * cfg.alpha);
    ll += c.second * std::log(theta) + (c.first - c.second) * std::log(1 - theta);
  }
  return ll;
}

SequenceDatabase iid_uniform(std::size_t n, std::size_t len, std::size_t alphabet, std::uint64_t seed) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < alphabet; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)));
  SequenceDatabase db;
  db.alphabet = labels;
  XorShift64Star rng(seed);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<LabelId> seq;
    for (std::size_t i = 0; i < len; ++i) seq.push_back(static_cast<LabelId>(rng.below(alphabet)));
    db.sequences.push_back(seq);
  }
  return db;
}

}  // namespace

TEST(Summarize, Examples) {
  // u = 0, v = 1
  const std::vector<LabelId> history{0, 1, 0};
  auto bin = summarize(history, {0, 1}, config(2));
  EXPECT_EQ(bin.entries, (std::vector<std::uint8_t>{1, 1}));
  auto ord = summarize(history, {0, 1}, config(2, SummaryKind::ordinal));
  EXPECT_EQ(ord.entries, (std::vector<std::uint8_t>{0, 1}));

  EXPECT_EQ(summarize({}, {0, 1}, config(2)).entries, (std::vector<std::uint8_t>{0, 0}));
  EXPECT_TRUE(summarize({}, {0, 1}, config(2, SummaryKind::ordinal)).entries.empty());
  EXPECT_EQ(summarize(history, {0, 1}, config(1)).entries, (std::vector<std::uint8_t>{1, 0}));
}

TEST(Summarize, EncodeDecode) {
  HistorySummary b{SummaryKind::binary, {0, 1, 1, 0}};
  EXPECT_EQ(b.encode(), "0110");
  EXPECT_EQ(HistorySummary::decode(SummaryKind::binary, "0110"), b);
  HistorySummary o{SummaryKind::ordinal, {2, 0}};
  EXPECT_EQ(o.encode(), "[2,0]");
  EXPECT_EQ(HistorySummary::decode(SummaryKind::ordinal, "[2,0]"), o);
  EXPECT_EQ(HistorySummary::decode(SummaryKind::ordinal, "[]").entries.size(), 0u);
  EXPECT_THROW(HistorySummary::decode(SummaryKind::binary, "012"), DataError);
}

TEST(SummarySpace, Sizes) {
  EXPECT_EQ(summary_space(SummaryKind::binary, 3).size(), 8u);
  // ordered selections of 0..3 out of 3 labels: 1 + 3 + 6 + 6
  EXPECT_EQ(summary_space(SummaryKind::ordinal, 3).size(), 16u);
}

TEST(Fit, ThreeSequenceFixture) {
  auto db = SequenceDatabase::from_labels({{"u", "x"}, {"u", "y"}, {"v", "y"}});
  auto m = fit(db, {id(db, "x")}, {id(db, "u")}, config(1));
  HistorySummary present{SummaryKind::binary, {1}};
  EXPECT_NEAR(m.theta_for(id(db, "x"), present), (1 + 0.1) / (2 + 0.2), 1e-12);
  EXPECT_EQ(m.table.at(present).count_h, 2u);
  EXPECT_EQ(m.table.at(present).count_xh[0], 1u);
}

TEST(Fit, EmptyInfluencingSetGivesSmoothedMarginal) {
  auto db = SequenceDatabase::from_labels({{"u", "x"}, {"u", "y"}, {"v", "y"}});
  auto m = fit(db, {id(db, "x")}, {}, config(1));
  ASSERT_EQ(m.table.size(), 1u);
  EXPECT_NEAR(m.theta(0, {SummaryKind::binary, {}}), (1 + 0.1) / (6 + 0.2), 1e-12);
}

TEST(Fit, UnseenSummaryIsOneHalf) {
  auto db = SequenceDatabase::from_labels({{"u", "x"}, {"v", "y"}});
  auto m = fit(db, {id(db, "x")}, {id(db, "u"), id(db, "v")}, config(1));
  EXPECT_DOUBLE_EQ(m.theta(0, {SummaryKind::binary, {1, 1}}), 0.5);
}

TEST(Fit, SmoothingBoundsAndOrderInvariance) {
  auto db = iid_uniform(30, 8, 4, 3);
  auto m = fit(db, {0, 1}, {2}, config(2));
  for (const auto& [h, e] : m.table) {
    const double c = static_cast<double>(e.count_h);
    for (double t : e.theta) {
      EXPECT_GT(t, 0.0);
      EXPECT_LT(t, 1.0);
      EXPECT_GE(t, 0.1 / (c + 0.2) - 1e-15);
      EXPECT_LE(t, (c + 0.1) / (c + 0.2) + 1e-15);
    }
  }
  auto reversed = db;
  std::reverse(reversed.sequences.begin(), reversed.sequences.end());
  EXPECT_EQ(serialize_model(fit(reversed, {0, 1}, {2}, config(2))), serialize_model(m));
}

TEST(Fit, Errors) {
  SequenceDatabase empty;
  EXPECT_THROW(fit(empty, {}, {}, config(1)), DataError);
  auto db = SequenceDatabase::from_labels({{"a"}});
  EXPECT_THROW(fit(db, {7}, {}, config(1)), UsageError);
  SummConfig bad;
  bad.alpha = 0;
  EXPECT_THROW(fit(db, {0}, {}, bad), UsageError);
}

TEST(LogLoss, FourPositionFixture) {
  // Model from the three-sequence fixture: theta(x|u)=0.5, theta(x|none)=0.1/4.2.
  auto train = SequenceDatabase::from_labels({{"u", "x"}, {"u", "y"}, {"v", "y"}});
  auto m = fit(train, {id(train, "x")}, {id(train, "u")}, config(1));
  auto test = SequenceDatabase::from_labels({{"u", "x"}, {"v", "x"}});
  // positions: (none,u) (u,x) (none,v) (v,x)
  //   -ln(4.1/4.2) - ln(0.5) - ln(4.1/4.2) - ln(0.1/4.2)
  const double expected = 4.479011902001435;
  auto r = log_loss(m, test);
  EXPECT_NEAR(r.per_label[0], expected, 1e-9);
  EXPECT_NEAR(r.total_log_likelihood, -expected, 1e-9);
  EXPECT_EQ(r.positions, 4u);
}

TEST(LogLoss, OneHalfEverywhere) {
  auto train = SequenceDatabase::from_labels({{"x", "y"}});
  auto m = fit(train, {id(train, "x")}, {}, config(1));
  m.table.begin()->second.theta = {0.5};
  auto test = iid_uniform(5, 7, 2, 11);
  test.alphabet = {"x", "y"};
  EXPECT_NEAR(log_loss(m, test).per_label[0], 35 * std::log(2.0), 1e-9);
}

TEST(LogLoss, AdditiveOverDuplicatedData) {
  auto db = iid_uniform(20, 6, 3, 5);
  auto m = fit(db, {0}, {1}, config(2));
  auto twice = db;
  twice.sequences.insert(twice.sequences.end(), db.sequences.begin(), db.sequences.end());
  EXPECT_NEAR(log_loss(m, twice).per_label[0], 2 * log_loss(m, db).per_label[0], 1e-9);
}

TEST(LogLoss, MemorizedDataApproachesZero) {
  auto db = SequenceDatabase::from_labels({{"u", "x"}, {"u", "x"}, {"v", "y"}});
  double previous = std::numeric_limits<double>::infinity();
  for (double alpha : {1e-1, 1e-3, 1e-6}) {
    auto cfg = config(1);
    cfg.alpha = alpha;
    auto loss = log_loss(fit(db, {id(db, "x")}, {id(db, "u")}, cfg), db).per_label[0];
    EXPECT_LT(loss, previous);
    previous = loss;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(Score, MatchesDirectComputation) {
  auto db = iid_uniform(20, 10, 4, 21);
  const auto cfg = config(2);
  for (const LabelSet& u : {LabelSet{}, LabelSet{1}, LabelSet{1, 3}}) {
    auto m = fit(db, {0}, u, cfg);
    const double penalty = 0.5 * static_cast<double>(m.table.size()) * std::log(200.0);
    EXPECT_NEAR(score(m), direct_log_likelihood(db, 0, u, cfg) - penalty, 1e-9);
  }
}

TEST(Score, PenaltyRejectsIrrelevantLabel) {
  auto db = iid_uniform(20, 10, 4, 21);
  EXPECT_LT(score(db, {0}, {1}, config(4)), score(db, {0}, {}, config(4)));
}

TEST(Score, UnpenalizedScoreGrowsWithNestedSets) {
  auto sim = simulate(planted_model(), kBackground, 200, 10, 17);
  const auto cfg = config(4, SummaryKind::binary, 0.0);
  LabelSet u;
  double previous = score(sim, {5}, u, cfg);
  for (LabelId add : {4, 0, 1}) {
    u = make_label_set([&] { auto v = u; v.push_back(add); return v; }());
    double s = score(sim, {5}, u, cfg);
    EXPECT_GE(s, previous - 1e-9);
    previous = s;
  }
}

TEST(Learn, RecoversPlantedSet) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto sim = simulate(planted_model(), kBackground, 1000, 10, seed);
    auto m = learn(sim, {5}, config(4));
    EXPECT_EQ(m.label_names(m.influencing), std::vector<std::string>{"u"}) << "seed " << seed;
  }
}

TEST(Learn, IndependentDataGivesEmptySet) {
  auto db = iid_uniform(300, 10, 5, 8);
  auto m = learn(db, {0}, config(4));
  EXPECT_TRUE(m.influencing.empty());
}

TEST(Learn, DeterministicWithTrace) {
  auto sim = simulate(planted_model(), kBackground, 300, 10, 3);
  LearnTrace t1, t2;
  auto a = learn(sim, {5}, config(4), &t1);
  auto b = learn(sim, {5}, config(4), &t2);
  EXPECT_EQ(serialize_model(a), serialize_model(b));
  EXPECT_EQ(t1.steps, t2.steps);
  ASSERT_FALSE(t1.steps.empty());
  EXPECT_EQ(t1.steps.front().first, "+u");
}

TEST(Kinds, BinaryAndOrdinalAgreeAtKappaOne) {
  auto db = iid_uniform(40, 8, 4, 13);
  const LabelSet u{1, 2};
  auto bin = fit(db, {0, 3}, u, config(1));
  auto ord = fit(db, {0, 3}, u, config(1, SummaryKind::ordinal));
  EXPECT_EQ(bin.table.size(), ord.table.size());
  for (const auto& s : db.sequences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto prefix = std::span<const LabelId>(s).first(i);
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_DOUBLE_EQ(bin.theta(k, summarize(prefix, u, bin.config)), ord.theta(k, summarize(prefix, u, ord.config)));
      }
    }
  }
}

TEST(Simulate, ConditionalFrequenciesWithinThreeSigma) {
  const double eps = 0.05;
  std::map<HistorySummary, std::vector<double>> thetas{{{SummaryKind::binary, {0}}, {eps}},
                                                       {{SummaryKind::binary, {1}}, {1 - eps}}};
  auto planted = SummModel::planted({"a", "b", "c", "d", "u", "x"}, {5}, {4}, config(4), thetas);
  auto sim = simulate(planted, kBackground, 1000, 10, 99);
  auto m = fit(sim, {5}, {4}, config(4));
  for (const auto& [h, p] : thetas) {
    const auto& e = m.table.at(h);
    const double n = static_cast<double>(e.count_h);
    const double freq = static_cast<double>(e.count_xh[0]) / n;
    EXPECT_NEAR(freq, p[0], 3 * std::sqrt(p[0] * (1 - p[0]) / n)) << h.encode();
  }
}

TEST(Simulate, DeterministicAndShortSequences) {
  auto a = simulate(planted_model(), kBackground, 50, 10, 4);
  auto b = simulate(planted_model(), kBackground, 50, 10, 4);
  EXPECT_EQ(a.sequences, b.sequences);
  EXPECT_NE(a.sequences, simulate(planted_model(), kBackground, 50, 10, 5).sequences);

  auto ones = simulate(planted_model(), kBackground, 50, 1, 4);
  auto m = fit(ones, {5}, {4}, config(4));
  ASSERT_EQ(m.table.size(), 1u);
  EXPECT_EQ(m.table.begin()->first.entries, std::vector<std::uint8_t>{0});
}

TEST(Simulate, RejectsInconsistentPlantedTables) {
  auto incomplete = SummModel::planted({"u", "x", "y"}, {1}, {0}, config(2), {{{SummaryKind::binary, {0}}, {0.5}}});
  EXPECT_THROW(simulate(incomplete, {{2, 1}}, 10, 5, 1), DataError);
  EXPECT_THROW(simulate(planted_model(), {{5, 1}}, 10, 5, 1), DataError);
  EXPECT_THROW(simulate(planted_model(), {}, 10, 5, 1), DataError);
}

TEST(Markov, CountFormula) {
  auto db = SequenceDatabase::from_labels({{"a", "b"}, {"a", "b"}});
  auto mc = markov_baseline(db, 1, 0.1);
  const std::vector<LabelId> ctx{0};
  EXPECT_NEAR(mc.probability(ctx, 1), (2 + 0.1) / (2 + 0.1 * 2), 1e-12);
  EXPECT_THROW(markov_baseline(db, 0), UsageError);
}

TEST(Markov, IidUniformLossNearEntropy) {
  auto train = iid_uniform(500, 20, 4, 1);
  auto test = iid_uniform(500, 20, 4, 2);
  for (int order : {1, 2}) {
    std::size_t n = 0;
    double per_step = markov_baseline(train, order).sequence_log_loss(test, &n) / static_cast<double>(n);
    EXPECT_NEAR(per_step, std::log(4.0), 0.05 * std::log(4.0)) << "order " << order;
  }
  EXPECT_DOUBLE_EQ(uniform_log_loss(10, 4), 10 * std::log(4.0));
}

TEST(Markov, DeterministicChainBeatsMarginal) {
  std::vector<std::vector<std::string>> seqs;
  for (int i = 0; i < 30; ++i) seqs.push_back({"a", "b", "c", "a", "b", "c", "a", "b"});
  auto db = SequenceDatabase::from_labels(seqs);
  auto markov = markov_baseline(db, 1).log_loss(db, {0});
  auto marginal = log_loss(fit(db, {0}, {}, config(1)), db);
  EXPECT_LE(markov.per_label[0], marginal.per_label[0]);
}

TEST(ModelFile, RoundTrip) {
  auto sim = simulate(planted_model(SummaryKind::ordinal), kBackground, 100, 10, 2);
  auto m = fit(sim, {4, 5}, {0, 4}, config(3, SummaryKind::ordinal));
  auto dir = eventdistill::testing::temp_dir("model");
  save_model(m, dir / "m.jsonl");
  auto back = load_model(dir / "m.jsonl");
  EXPECT_EQ(serialize_model(back), serialize_model(m));
  EXPECT_EQ(back.influencing, m.influencing);
  EXPECT_NEAR(log_loss(back, sim).mean, log_loss(m, sim).mean, 1e-12);
}
