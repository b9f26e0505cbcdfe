#pragma once
// Summary Markov models over label sequences.
//
// For each interest label x and each position i, the model gives the
// probability that the event at i is x given a summary h of the events in
// the lookback window (the kappa events before i, clipped at the sequence
// start). Only labels in the influencing set U enter the summary:
//   binary  - one presence bit per label of U (sorted order)
//   ordinal - the U-labels present in the window, most recent first
//
// Parameters are Laplace-smoothed Bernoulli rates
//   theta_{x|h} = (n(x,h) + alpha) / (n(h) + 2 alpha)
// and U is chosen by greedy forward-then-backward search on
//   score = loglik - gamma * |X| * (#observed summaries) * ln(#positions).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eventdistill/corpus_store.hpp"
#include "eventdistill/error.hpp"
#include "eventdistill/io.hpp"
#include "eventdistill/pattern_miner.hpp"

namespace eventdistill {

using LabelSet = std::vector<LabelId>;  // sorted, unique

inline LabelSet make_label_set(std::vector<LabelId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

enum class SummaryKind { binary, ordinal };

inline std::string_view to_string(SummaryKind k) { return k == SummaryKind::binary ? "binary" : "ordinal"; }

struct SummConfig {
  double alpha = 0.1;
  double gamma = 0.5;
  int kappa = 4;
  SummaryKind kind = SummaryKind::binary;

  void validate() const {
    if (!(alpha > 0)) throw UsageError("alpha must be positive");
    if (!(gamma >= 0)) throw UsageError("gamma must be nonnegative");
    if (kappa < 1) throw UsageError("kappa must be at least 1");
  }
};

/// Binary: entries[j] is 1 iff U[j] is in the window. Ordinal: indices into
/// U of the labels in the window, most recent first, each at most once.
struct HistorySummary {
  SummaryKind kind = SummaryKind::binary;
  std::vector<std::uint8_t> entries;

  auto operator<=>(const HistorySummary&) const = default;

  /// "0110" for binary; "[2,0]" for ordinal.
  std::string encode() const {
    std::string out;
    if (kind == SummaryKind::binary) {
      for (auto e : entries) out.push_back(e ? '1' : '0');
      return out;
    }
    out.push_back('[');
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) out.push_back(',');
      out.append(std::to_string(entries[i]));
    }
    out.push_back(']');
    return out;
  }

  static HistorySummary decode(SummaryKind kind, std::string_view text) {
    HistorySummary h{kind, {}};
    if (kind == SummaryKind::binary) {
      for (char c : text) {
        if (c != '0' && c != '1') throw DataError("bad binary summary '" + std::string(text) + "'");
        h.entries.push_back(c == '1');
      }
      return h;
    }
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
      throw DataError("bad ordinal summary '" + std::string(text) + "'");
    }
    auto body = text.substr(1, text.size() - 2);
    if (body.empty()) return h;
    for (const auto& part : split(body, ',')) {
      try {
        h.entries.push_back(static_cast<std::uint8_t>(std::stoi(part)));
      } catch (const std::exception&) {
        throw DataError("bad ordinal summary '" + std::string(text) + "'");
      }
    }
    return h;
  }
};

/// Summary of the last kappa events of `history` with respect to U.
inline HistorySummary summarize(std::span<const LabelId> history, const LabelSet& influencing, const SummConfig& cfg) {
  if (influencing.size() > std::numeric_limits<std::uint8_t>::max()) throw UsageError("influencing set too large");
  HistorySummary h{cfg.kind, {}};
  const std::size_t start = history.size() > static_cast<std::size_t>(cfg.kappa) ? history.size() - cfg.kappa : 0;
  if (cfg.kind == SummaryKind::binary) {
    h.entries.assign(influencing.size(), 0);
    for (std::size_t i = start; i < history.size(); ++i) {
      auto it = std::lower_bound(influencing.begin(), influencing.end(), history[i]);
      if (it != influencing.end() && *it == history[i]) h.entries[it - influencing.begin()] = 1;
    }
    return h;
  }
  for (std::size_t i = history.size(); i > start; --i) {
    auto it = std::lower_bound(influencing.begin(), influencing.end(), history[i - 1]);
    if (it == influencing.end() || *it != history[i - 1]) continue;
    auto idx = static_cast<std::uint8_t>(it - influencing.begin());
    if (std::find(h.entries.begin(), h.entries.end(), idx) == h.entries.end()) h.entries.push_back(idx);
  }
  return h;
}

/// All summaries a model over |U| labels can produce.
inline std::vector<HistorySummary> summary_space(SummaryKind kind, std::size_t u_size) {
  std::vector<HistorySummary> out;
  if (kind == SummaryKind::binary) {
    if (u_size >= 20) throw UsageError("binary summary space too large to enumerate");
    for (std::size_t mask = 0; mask < (std::size_t{1} << u_size); ++mask) {
      HistorySummary h{kind, std::vector<std::uint8_t>(u_size, 0)};
      for (std::size_t j = 0; j < u_size; ++j) h.entries[j] = (mask >> j) & 1U;
      out.push_back(std::move(h));
    }
    return out;
  }
  if (u_size > 7) throw UsageError("ordinal summary space too large to enumerate");
  for (std::size_t mask = 0; mask < (std::size_t{1} << u_size); ++mask) {
    std::vector<std::uint8_t> members;
    for (std::size_t j = 0; j < u_size; ++j)
      if ((mask >> j) & 1U) members.push_back(static_cast<std::uint8_t>(j));
    do {
      out.push_back({kind, members});
    } while (std::next_permutation(members.begin(), members.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct SummTableEntry {
  std::size_t count_h = 0;
  std::vector<std::size_t> count_xh;  // parallel to the model's interest labels
  std::vector<double> theta;
};

class SummModel {
 public:
  std::vector<std::string> alphabet;
  LabelSet interest;
  LabelSet influencing;
  SummConfig config;
  std::map<HistorySummary, SummTableEntry> table;
  std::size_t positions = 0;

  /// theta_{x|h}; a summary never seen in training gets alpha/(2 alpha) = 0.5.
  double theta(std::size_t interest_index, const HistorySummary& h) const {
    auto it = table.find(h);
    if (it == table.end()) return 0.5;
    return it->second.theta.at(interest_index);
  }

  double theta_for(LabelId x, const HistorySummary& h) const {
    auto it = std::lower_bound(interest.begin(), interest.end(), x);
    if (it == interest.end() || *it != x) throw UsageError("label is not an interest label of this model");
    return theta(static_cast<std::size_t>(it - interest.begin()), h);
  }

  std::size_t free_parameters() const { return interest.size() * table.size(); }

  /// Sum over training cells of n(x,h) ln theta + (n(h) - n(x,h)) ln(1 - theta).
  double log_likelihood() const {
    double ll = 0;
    for (const auto& [h, e] : table) {
      for (std::size_t k = 0; k < interest.size(); ++k) {
        const double pos = static_cast<double>(e.count_xh[k]);
        const double neg = static_cast<double>(e.count_h - e.count_xh[k]);
        if (pos > 0) ll += pos * std::log(e.theta[k]);
        if (neg > 0) ll += neg * std::log1p(-e.theta[k]);
      }
    }
    return ll;
  }

  std::vector<std::string> label_names(const LabelSet& ids) const {
    std::vector<std::string> out;
    for (auto id : ids) out.push_back(alphabet.at(id));
    return out;
  }

  /// Planted model for simulation; thetas must cover the full summary space.
  static SummModel planted(std::vector<std::string> alphabet, LabelSet interest, LabelSet influencing,
                           SummConfig cfg, const std::map<HistorySummary, std::vector<double>>& thetas) {
    SummModel m;
    m.alphabet = std::move(alphabet);
    m.interest = make_label_set(std::move(interest));
    m.influencing = make_label_set(std::move(influencing));
    m.config = cfg;
    for (const auto& [h, th] : thetas) {
      if (th.size() != m.interest.size()) throw DataError("planted theta row has the wrong width");
      m.table[h] = {0, std::vector<std::size_t>(th.size(), 0), th};
    }
    return m;
  }
};

namespace detail {

inline void check_labels(const SequenceDatabase& db, const LabelSet& ids, const char* what) {
  for (auto id : ids)
    if (id >= db.alphabet.size()) throw UsageError(std::string(what) + " label id outside the alphabet");
}

}  // namespace detail

/// Counts every (position, summary) cell and smooths.
inline SummModel fit(const SequenceDatabase& train, const LabelSet& interest, const LabelSet& influencing,
                     const SummConfig& cfg) {
  cfg.validate();
  if (train.sequences.empty()) throw DataError("empty training set");
  detail::check_labels(train, interest, "interest");
  detail::check_labels(train, influencing, "influencing");

  SummModel m;
  m.alphabet = train.alphabet;
  m.interest = make_label_set(interest);
  m.influencing = make_label_set(influencing);
  m.config = cfg;

  for (const auto& seq : train.sequences) {
    std::span<const LabelId> s(seq);
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto& e = m.table[summarize(s.first(i), m.influencing, cfg)];
      if (e.count_xh.empty()) e.count_xh.assign(m.interest.size(), 0);
      ++e.count_h;
      auto it = std::lower_bound(m.interest.begin(), m.interest.end(), s[i]);
      if (it != m.interest.end() && *it == s[i]) ++e.count_xh[it - m.interest.begin()];
      ++m.positions;
    }
  }
  for (auto& [h, e] : m.table) {
    e.theta.resize(m.interest.size());
    for (std::size_t k = 0; k < m.interest.size(); ++k) {
      e.theta[k] = (static_cast<double>(e.count_xh[k]) + cfg.alpha) / (static_cast<double>(e.count_h) + 2 * cfg.alpha);
    }
  }
  return m;
}

/// Penalized log-likelihood of the fitted model on its own training data.
inline double score(const SummModel& fitted) {
  if (fitted.positions == 0) throw DataError("empty training set");
  return fitted.log_likelihood() - fitted.config.gamma * static_cast<double>(fitted.free_parameters()) *
                                       std::log(static_cast<double>(fitted.positions));
}

inline double score(const SequenceDatabase& data, const LabelSet& interest, const LabelSet& influencing,
                    const SummConfig& cfg) {
  return score(fit(data, interest, influencing, cfg));
}

struct LearnTrace {
  std::vector<std::pair<std::string, double>> steps;  // ("+label" / "-label", score after)
};

/// Greedy structure search from U = {}: add the single label with the largest
/// strictly positive score gain until none helps, then remove labels the same
/// way. Equal gains go to the smallest label id (= lexicographic label).
inline SummModel learn(const SequenceDatabase& train, const LabelSet& interest, const SummConfig& cfg,
                       LearnTrace* trace = nullptr) {
  cfg.validate();
  if (train.sequences.empty()) throw DataError("empty training set");
  LabelSet current;
  double current_score = score(train, interest, current, cfg);

  for (;;) {
    std::optional<LabelId> best;
    double best_score = current_score;
    for (LabelId c = 0; c < train.alphabet.size(); ++c) {
      if (std::binary_search(current.begin(), current.end(), c)) continue;
      auto cand = current;
      cand.insert(std::upper_bound(cand.begin(), cand.end(), c), c);
      double s = score(train, interest, cand, cfg);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    if (!best) break;
    current.insert(std::upper_bound(current.begin(), current.end(), *best), *best);
    current_score = best_score;
    if (trace) trace->steps.emplace_back("+" + train.alphabet[*best], current_score);
  }

  for (;;) {
    std::optional<LabelId> best;
    double best_score = current_score;
    for (auto c : current) {
      LabelSet cand;
      for (auto u : current)
        if (u != c) cand.push_back(u);
      double s = score(train, interest, cand, cfg);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    if (!best) break;
    current.erase(std::find(current.begin(), current.end(), *best));
    current_score = best_score;
    if (trace) trace->steps.emplace_back("-" + train.alphabet[*best], current_score);
  }
  return fit(train, interest, current, cfg);
}

struct LogLossReport {
  std::vector<double> per_label;  // parallel to the interest labels
  double mean = 0;
  double total_log_likelihood = 0;  // signed: -(sum of per_label)
  std::size_t positions = 0;
};

namespace detail {

inline double bernoulli_loss(bool occurred, double p) { return occurred ? -std::log(p) : -std::log1p(-p); }

inline LogLossReport finish_report(std::vector<double> per_label, std::size_t positions) {
  LogLossReport r;
  r.per_label = std::move(per_label);
  double total = std::accumulate(r.per_label.begin(), r.per_label.end(), 0.0);
  r.mean = r.per_label.empty() ? 0.0 : total / static_cast<double>(r.per_label.size());
  r.total_log_likelihood = -total;
  r.positions = positions;
  return r;
}

// Test data may be interned against a different alphabet; remap by label text.
inline std::vector<std::optional<LabelId>> alphabet_map(const std::vector<std::string>& from,
                                                        const std::vector<std::string>& to) {
  std::vector<std::optional<LabelId>> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto it = std::lower_bound(to.begin(), to.end(), from[i]);
    if (it != to.end() && *it == from[i]) out[i] = static_cast<LabelId>(it - to.begin());
  }
  return out;
}

// Labels outside the model alphabet map to an id no model set contains.
inline std::vector<std::vector<LabelId>> remap(const SequenceDatabase& db, const std::vector<std::string>& alphabet) {
  if (db.alphabet == alphabet) return db.sequences;
  auto map = alphabet_map(db.alphabet, alphabet);
  const auto unknown = static_cast<LabelId>(alphabet.size());
  std::vector<std::vector<LabelId>> out;
  for (const auto& s : db.sequences) {
    std::vector<LabelId> r;
    for (auto id : s) r.push_back(map[id].value_or(unknown));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Binary log loss per interest label summed over every test position.
inline LogLossReport log_loss(const SummModel& model, const SequenceDatabase& test) {
  std::vector<double> per(model.interest.size(), 0.0);
  std::size_t positions = 0;
  for (const auto& seq : detail::remap(test, model.alphabet)) {
    std::span<const LabelId> s(seq);
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto h = summarize(s.first(i), model.influencing, model.config);
      for (std::size_t k = 0; k < model.interest.size(); ++k) {
        per[k] += detail::bernoulli_loss(s[i] == model.interest[k], model.theta(k, h));
      }
      ++positions;
    }
  }
  return detail::finish_report(std::move(per), positions);
}

/// Order-k Markov chain over the full alphabet with pseudocount smoothing:
///   P(b | ctx) = (n(ctx, b) + alpha) / (n(ctx) + alpha |A|)
/// where ctx is the previous k labels, clipped at the sequence start. A
/// context never seen in training predicts uniformly.
class MarkovChain {
 public:
  MarkovChain(const SequenceDatabase& train, int order, double alpha) : order_(order), alpha_(alpha) {
    if (order < 1) throw UsageError("Markov order must be at least 1");
    if (!(alpha > 0)) throw UsageError("alpha must be positive");
    if (train.sequences.empty()) throw DataError("empty training set");
    alphabet_ = train.alphabet;
    for (const auto& seq : train.sequences) {
      std::span<const LabelId> s(seq);
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto& c = counts_[context(s, i)];
        ++c.total;
        ++c.next[s[i]];
      }
    }
  }

  int order() const { return order_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }

  double probability(std::span<const LabelId> history, LabelId next) const {
    const double a = static_cast<double>(alphabet_.size());
    auto it = counts_.find(context(history, history.size()));
    if (it == counts_.end()) return 1.0 / a;
    auto n = it->second.next.find(next);
    double hits = n == it->second.next.end() ? 0.0 : static_cast<double>(n->second);
    return (hits + alpha_) / (static_cast<double>(it->second.total) + alpha_ * a);
  }

  /// Categorical log loss of predicting every test label.
  double sequence_log_loss(const SequenceDatabase& test, std::size_t* positions = nullptr) const {
    double loss = 0;
    std::size_t n = 0;
    for (const auto& seq : detail::remap(test, alphabet_)) {
      std::span<const LabelId> s(seq);
      for (std::size_t i = 0; i < s.size(); ++i, ++n) {
        double p = s[i] < alphabet_.size() ? probability(s.first(i), s[i]) : 1e-12;
        loss -= std::log(p);
      }
    }
    if (positions) *positions = n;
    return loss;
  }

  /// Binary occurrence loss for each interest label, using P(x | ctx) as the
  /// occurrence probability; directly comparable with log_loss(SummModel).
  LogLossReport log_loss(const SequenceDatabase& test, const LabelSet& interest) const {
    std::vector<double> per(interest.size(), 0.0);
    std::size_t positions = 0;
    for (const auto& seq : detail::remap(test, alphabet_)) {
      std::span<const LabelId> s(seq);
      for (std::size_t i = 0; i < s.size(); ++i, ++positions) {
        for (std::size_t k = 0; k < interest.size(); ++k) {
          per[k] += detail::bernoulli_loss(s[i] == interest[k], probability(s.first(i), interest[k]));
        }
      }
    }
    return detail::finish_report(std::move(per), positions);
  }

 private:
  struct Counts {
    std::size_t total = 0;
    std::map<LabelId, std::size_t> next;
  };

  std::vector<LabelId> context(std::span<const LabelId> s, std::size_t i) const {
    std::size_t start = i > static_cast<std::size_t>(order_) ? i - order_ : 0;
    return {s.begin() + static_cast<std::ptrdiff_t>(start), s.begin() + static_cast<std::ptrdiff_t>(i)};
  }

  int order_;
  double alpha_;
  std::vector<std::string> alphabet_;
  std::map<std::vector<LabelId>, Counts> counts_;
};

inline MarkovChain markov_baseline(const SequenceDatabase& train, int order, double alpha = 0.1) {
  return MarkovChain(train, order, alpha);
}

/// Loss of predicting every position uniformly over the alphabet.
inline double uniform_log_loss(std::size_t positions, std::size_t alphabet_size) {
  return static_cast<double>(positions) * std::log(static_cast<double>(alphabet_size));
}

/// Samples sequences from a planted model. At each position the interest
/// labels are tried in ascending order, each occurring with probability
/// theta given the current summary; the first success is emitted, otherwise
/// a background label is drawn from `background` (weights over labels that
/// are not interest labels).
inline SequenceDatabase simulate(const SummModel& planted, const std::vector<std::pair<LabelId, double>>& background,
                                 std::size_t n_sequences, std::size_t seq_len, std::uint64_t seed) {
  planted.config.validate();
  for (const auto& h : summary_space(planted.config.kind, planted.influencing.size())) {
    auto it = planted.table.find(h);
    if (it == planted.table.end()) throw DataError("planted model lacks theta for summary " + h.encode());
    for (double t : it->second.theta)
      if (!(t >= 0 && t <= 1)) throw DataError("planted theta outside [0, 1]");
  }
  if (planted.table.size() != summary_space(planted.config.kind, planted.influencing.size()).size()) {
    throw DataError("planted model has thetas for impossible summaries");
  }
  double total_weight = 0;
  for (const auto& [id, w] : background) {
    if (id >= planted.alphabet.size()) throw DataError("background label outside the alphabet");
    if (std::binary_search(planted.interest.begin(), planted.interest.end(), id)) {
      throw DataError("background distribution includes an interest label");
    }
    if (!(w >= 0)) throw DataError("negative background weight");
    total_weight += w;
  }
  if (!(total_weight > 0)) throw DataError("background distribution is empty");

  XorShift64Star rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng.next() >> 11) * 0x1.0p-53; };

  SequenceDatabase db;
  db.alphabet = planted.alphabet;
  for (std::size_t n = 0; n < n_sequences; ++n) {
    std::vector<LabelId> seq;
    for (std::size_t i = 0; i < seq_len; ++i) {
      auto h = summarize(seq, planted.influencing, planted.config);
      const auto& th = planted.table.at(h).theta;
      std::optional<LabelId> emitted;
      for (std::size_t k = 0; k < planted.interest.size() && !emitted; ++k) {
        if (uniform() < th[k]) emitted = planted.interest[k];
      }
      if (!emitted) {
        double r = uniform() * total_weight;
        emitted = background.back().first;
        for (const auto& [id, w] : background) {
          if (r < w) {
            emitted = id;
            break;
          }
          r -= w;
        }
      }
      seq.push_back(*emitted);
    }
    db.sequences.push_back(std::move(seq));
  }
  return db;
}

// Model file: one JSON object per line.
//   {"kind":"config","alpha":..,"gamma":..,"kappa":..,"summary":"binary"|"ordinal","positions":..}
//   {"kind":"alphabet","labels":[...]}
//   {"kind":"interest","labels":[...]}
//   {"kind":"influencing","labels":[...]}        (sorted; summaries index into this)
//   {"kind":"theta","x":..,"summary":"01"|"[1,0]","count_xh":..,"count_h":..,"theta":..}
inline std::string serialize_model(const SummModel& m) {
  std::string out;
  auto line = [&out](const json& j) { out.append(j.dump()).push_back('\n'); };
  line({{"kind", "config"},
        {"alpha", m.config.alpha},
        {"gamma", m.config.gamma},
        {"kappa", m.config.kappa},
        {"summary", std::string(to_string(m.config.kind))},
        {"positions", m.positions}});
  line({{"kind", "alphabet"}, {"labels", m.alphabet}});
  line({{"kind", "interest"}, {"labels", m.label_names(m.interest)}});
  line({{"kind", "influencing"}, {"labels", m.label_names(m.influencing)}});
  for (const auto& [h, e] : m.table) {
    for (std::size_t k = 0; k < m.interest.size(); ++k) {
      line({{"kind", "theta"},
            {"x", m.alphabet[m.interest[k]]},
            {"summary", h.encode()},
            {"count_xh", e.count_xh[k]},
            {"count_h", e.count_h},
            {"theta", e.theta[k]}});
    }
  }
  return out;
}

inline SummModel parse_model(std::string_view text) {
  SummModel m;
  bool have_alphabet = false;
  auto ids_of = [&](const JsonLine& rec) {
    if (!have_alphabet) throw ParseError(rec.line_number, "alphabet record must come first");
    LabelSet ids;
    for (const auto& l : required_field<std::vector<std::string>>(rec, "labels")) {
      auto it = std::lower_bound(m.alphabet.begin(), m.alphabet.end(), l);
      if (it == m.alphabet.end() || *it != l) throw ParseError(rec.line_number, "label '" + l + "' not in alphabet");
      ids.push_back(static_cast<LabelId>(it - m.alphabet.begin()));
    }
    return make_label_set(ids);
  };
  for (const auto& rec : parse_json_lines(text)) {
    auto kind = required_field<std::string>(rec, "kind");
    if (kind == "config") {
      m.config.alpha = required_field<double>(rec, "alpha");
      m.config.gamma = required_field<double>(rec, "gamma");
      m.config.kappa = required_field<int>(rec, "kappa");
      auto s = required_field<std::string>(rec, "summary");
      if (s != "binary" && s != "ordinal") throw ParseError(rec.line_number, "unknown summary kind '" + s + "'");
      m.config.kind = s == "binary" ? SummaryKind::binary : SummaryKind::ordinal;
      m.positions = optional_field<std::size_t>(rec, "positions", 0);
    } else if (kind == "alphabet") {
      m.alphabet = required_field<std::vector<std::string>>(rec, "labels");
      if (!std::is_sorted(m.alphabet.begin(), m.alphabet.end())) throw ParseError(rec.line_number, "alphabet must be sorted");
      have_alphabet = true;
    } else if (kind == "interest") {
      m.interest = ids_of(rec);
    } else if (kind == "influencing") {
      m.influencing = ids_of(rec);
    } else if (kind == "theta") {
      HistorySummary h;
      try {
        h = HistorySummary::decode(m.config.kind, required_field<std::string>(rec, "summary"));
      } catch (const DataError& e) {
        throw ParseError(rec.line_number, e.what());
      }
      auto x = required_field<std::string>(rec, "x");
      auto it = std::find_if(m.interest.begin(), m.interest.end(), [&](LabelId id) { return m.alphabet[id] == x; });
      if (it == m.interest.end()) throw ParseError(rec.line_number, "theta for non-interest label '" + x + "'");
      auto k = static_cast<std::size_t>(it - m.interest.begin());
      auto& e = m.table[h];
      e.count_xh.resize(m.interest.size(), 0);
      e.theta.resize(m.interest.size(), 0.5);
      e.count_h = required_field<std::size_t>(rec, "count_h");
      e.count_xh[k] = required_field<std::size_t>(rec, "count_xh");
      e.theta[k] = required_field<double>(rec, "theta");
    } else {
      throw ParseError(rec.line_number, "unknown record kind '" + kind + "'");
    }
  }
  return m;
}

inline void save_model(const SummModel& m, const std::filesystem::path& path) { write_file_atomic(path, serialize_model(m)); }

inline SummModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

}  // namespace eventdistill
