#pragma once
// Event-concept knowledge graph export: concepts with labels and aliases,
// their top-level classes, and the causal relations between them.
//
// File format: one JSON object per line.
//   {"kind":"class","id":"Q180684","label":"conflict"}
//   {"id":"Q7164","label":"dispute","aliases":["disagreement"],"top_class_id":"Q180684"}
//   {"kind":"causal","cause":"Q7944","effect":"Q8070","property":"has_effect"}
// Records without "kind" (or with "kind":"concept") are concepts.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eventdistill/error.hpp"
#include "eventdistill/io.hpp"
#include "eventdistill/text.hpp"

namespace eventdistill {

using ConceptId = std::string;

struct EventConcept {
  ConceptId id;
  std::string canonical_label;
  std::vector<std::string> aliases;
  // Empty when the concept sits outside every top-level class; such concepts
  // are known to the graph but never part of the generation vocabulary.
  ConceptId top_class_id;
};

struct TopClass {
  ConceptId id;
  std::string label;
};

enum class CausalProperty { has_cause, has_immediate_cause, has_contributing_factor, has_effect };

inline std::string_view to_string(CausalProperty p) {
  switch (p) {
    case CausalProperty::has_cause: return "has_cause";
    case CausalProperty::has_immediate_cause: return "has_immediate_cause";
    case CausalProperty::has_contributing_factor: return "has_contributing_factor";
    case CausalProperty::has_effect: return "has_effect";
  }
  return "has_cause";
}

inline std::optional<CausalProperty> parse_causal_property(std::string_view s) {
  if (s == "has_cause" || s == "P828") return CausalProperty::has_cause;
  if (s == "has_immediate_cause" || s == "P1478") return CausalProperty::has_immediate_cause;
  if (s == "has_contributing_factor" || s == "P1479") return CausalProperty::has_contributing_factor;
  if (s == "has_effect" || s == "P1542") return CausalProperty::has_effect;
  return std::nullopt;
}

struct CausalPair {
  ConceptId cause_id;
  ConceptId effect_id;
  CausalProperty property;

  auto operator<=>(const CausalPair&) const = default;
};

using IdPair = std::pair<ConceptId, ConceptId>;

struct CausalReference {
  std::set<IdPair> pairs;  // closed under reversal
  std::size_t dropped = 0;  // source pairs with an endpoint outside every top-level class
};

struct CatalogStats {
  std::size_t top_classes = 0;
  std::size_t concepts = 0;
  std::size_t labels = 0;  // distinct canonical labels and aliases
  std::size_t causal_pairs = 0;
};

class ConceptCatalog {
 public:
  ConceptCatalog() = default;

  // Builds and validates a catalog. Throws DataError on label collisions,
  // unknown class references, or dangling causal references.
  ConceptCatalog(std::vector<TopClass> classes, std::vector<EventConcept> concepts,
                 std::vector<CausalPair> causal) {
    for (auto& c : classes) add_class(std::move(c));
    for (auto& c : concepts) add_concept(std::move(c));
    index_derived_keys();
    index_class_labels();
    for (auto& p : causal) add_causal(p);
  }

  static ConceptCatalog parse(std::string_view text) {
    std::vector<TopClass> classes;
    std::vector<EventConcept> concepts;
    std::vector<std::pair<std::size_t, CausalPair>> causal;
    for (const auto& rec : parse_json_lines(text)) {
      auto kind = optional_field<std::string>(rec, "kind", "concept");
      if (kind == "class") {
        TopClass c{required_field<std::string>(rec, "id"), required_field<std::string>(rec, "label")};
        if (c.id.empty()) throw ParseError(rec.line_number, "class id is empty");
        classes.push_back(std::move(c));
      } else if (kind == "concept") {
        EventConcept c;
        c.id = required_field<std::string>(rec, "id");
        c.canonical_label = required_field<std::string>(rec, "label");
        c.aliases = optional_field<std::vector<std::string>>(rec, "aliases", {});
        c.top_class_id = optional_field<std::string>(rec, "top_class_id", "");
        if (c.id.empty()) throw ParseError(rec.line_number, "concept id is empty");
        concepts.push_back(std::move(c));
      } else if (kind == "causal") {
        auto prop_text = required_field<std::string>(rec, "property");
        auto prop = parse_causal_property(prop_text);
        if (!prop) throw ParseError(rec.line_number, "unknown causal property '" + prop_text + "'");
        causal.emplace_back(rec.line_number,
                            CausalPair{required_field<std::string>(rec, "cause"),
                                       required_field<std::string>(rec, "effect"), *prop});
      } else {
        throw ParseError(rec.line_number, "unknown record kind '" + kind + "'");
      }
    }

    ConceptCatalog cat;
    for (auto& c : classes) cat.add_class(std::move(c));
    for (auto& c : concepts) cat.add_concept(std::move(c));
    cat.index_derived_keys();
    cat.index_class_labels();
    for (const auto& [line, p] : causal) {
      try {
        cat.add_causal(p);
      } catch (const DataError& e) {
        throw ParseError(line, e.what());
      }
    }
    return cat;
  }

  static ConceptCatalog load(const std::filesystem::path& path) { return parse(read_file(path)); }

  const std::vector<EventConcept>& concepts() const { return concepts_; }
  const std::vector<TopClass>& top_classes() const { return classes_; }
  const std::set<CausalPair>& causal_pairs() const { return causal_; }
  const std::map<std::string, ConceptId>& label_index() const { return label_index_; }

  CatalogStats stats() const {
    CatalogStats s;
    s.top_classes = classes_.size();
    s.concepts = concepts_.size();
    s.causal_pairs = causal_.size();
    std::set<std::string> labels;
    for (const auto& c : concepts_) {
      labels.insert(normalize_label(c.canonical_label));
      for (const auto& a : c.aliases) labels.insert(normalize_label(a));
    }
    s.labels = labels.size();
    return s;
  }

  const EventConcept* find_concept(std::string_view id) const {
    auto it = concept_pos_.find(std::string(id));
    return it == concept_pos_.end() ? nullptr : &concepts_[it->second];
  }

  const TopClass* find_class(std::string_view id) const {
    auto it = class_pos_.find(std::string(id));
    return it == class_pos_.end() ? nullptr : &classes_[it->second];
  }

  bool contains(std::string_view id) const { return find_concept(id) || find_class(id); }

  /// Top-level class labels sorted by normalized label.
  std::vector<std::string> vocabulary() const {
    std::vector<const TopClass*> sorted;
    for (const auto& c : classes_) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](const TopClass* a, const TopClass* b) {
      auto ka = normalize_label(a->label), kb = normalize_label(b->label);
      return ka != kb ? ka < kb : a->id < b->id;
    });
    std::vector<std::string> out;
    for (const auto* c : sorted) out.push_back(c->label);
    return out;
  }

  /// Canonical labels of every concept, sorted by normalized label. This is
  /// the default trigger order for corpus generation.
  std::vector<std::string> concept_labels() const {
    std::vector<std::pair<std::string, std::string>> keyed;
    for (const auto& c : concepts_) keyed.emplace_back(normalize_label(c.canonical_label), c.canonical_label);
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::string> out;
    for (auto& [k, label] : keyed) out.push_back(std::move(label));
    return out;
  }

  /// Looks up raw text. Concept labels and aliases win over top-level class
  /// labels; a query with a parenthetical suffix falls back to its base form.
  std::optional<ConceptId> resolve_label(std::string_view text) const {
    auto key = normalize_label(text);
    if (key.empty()) return std::nullopt;
    if (auto hit = lookup_key(key)) return hit;
    if (auto base = strip_parenthetical(key)) return lookup_key(*base);
    return std::nullopt;
  }

  /// Top-level class id for a concept or class id; empty if none.
  std::optional<ConceptId> top_class_of(std::string_view id) const {
    if (find_class(id)) return ConceptId(id);
    if (const auto* c = find_concept(id); c && !c->top_class_id.empty()) return c->top_class_id;
    return std::nullopt;
  }

  /// Resolves text all the way to a top-level class label, or nothing if the
  /// text is outside the generation vocabulary.
  std::optional<std::string> resolve_vocabulary_label(std::string_view text) const {
    auto id = resolve_label(text);
    if (!id) return std::nullopt;
    auto cls = top_class_of(*id);
    if (!cls) return std::nullopt;
    return find_class(*cls)->label;
  }

  /// Deduplicated causal pairs over all properties, emitted in both orders.
  CausalReference causal_reference() const {
    CausalReference ref;
    std::set<IdPair> seen;
    for (const auto& p : causal_) {
      if (!seen.insert({p.cause_id, p.effect_id}).second) continue;
      if (!top_class_of(p.cause_id) || !top_class_of(p.effect_id)) {
        ++ref.dropped;
        continue;
      }
      ref.pairs.insert({p.cause_id, p.effect_id});
      ref.pairs.insert({p.effect_id, p.cause_id});
    }
    return ref;
  }

  /// Content digest over the canonical (sorted) catalog contents.
  std::string digest() const {
    Fnv1a h;
    std::vector<const TopClass*> cls;
    for (const auto& c : classes_) cls.push_back(&c);
    std::sort(cls.begin(), cls.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const auto* c : cls) h.field("class").field(c->id).field(c->label);
    std::vector<const EventConcept*> con;
    for (const auto& c : concepts_) con.push_back(&c);
    std::sort(con.begin(), con.end(), [](auto* a, auto* b) { return a->id < b->id; });
    for (const auto* c : con) {
      h.field("concept").field(c->id).field(c->canonical_label).field(c->top_class_id);
      for (const auto& a : c->aliases) h.field(a);
    }
    for (const auto& p : causal_) h.field("causal").field(p.cause_id).field(p.effect_id).field(to_string(p.property));
    return h.hex();
  }

 private:
  void add_class(TopClass c) {
    if (normalize_label(c.label).empty()) throw DataError("class " + c.id + " has an empty label");
    if (class_pos_.count(c.id)) throw DataError("duplicate class id " + c.id);
    class_pos_[c.id] = classes_.size();
    classes_.push_back(std::move(c));
  }

  void add_concept(EventConcept c) {
    if (concept_pos_.count(c.id) || class_pos_.count(c.id)) throw DataError("duplicate id " + c.id);
    if (!c.top_class_id.empty() && !class_pos_.count(c.top_class_id)) {
      throw DataError("concept " + c.id + " references unknown top-level class " + c.top_class_id);
    }
    auto canonical = normalize_label(c.canonical_label);
    if (canonical.empty()) throw DataError("concept " + c.id + " has an empty label");
    std::vector<std::string> keys{canonical};
    for (const auto& a : c.aliases) {
      auto k = normalize_label(a);
      if (k.empty()) throw DataError("concept " + c.id + " has an empty alias");
      keys.push_back(std::move(k));
    }
    for (const auto& k : keys) {
      auto [it, inserted] = label_index_.emplace(k, c.id);
      if (!inserted && it->second != c.id) {
        throw DataError("label collision on '" + k + "' between concepts " + it->second + " and " + c.id);
      }
    }
    concept_pos_[c.id] = concepts_.size();
    concepts_.push_back(std::move(c));
  }

  // Parenthetical base forms ("conflict (psychological)" -> "conflict"). An
  // explicit label always wins; a base form claimed by two concepts is dropped.
  void index_derived_keys() {
    std::map<std::string, std::set<ConceptId>> claims;
    for (const auto& [key, id] : label_index_) {
      if (auto base = strip_parenthetical(key)) claims[*base].insert(id);
    }
    for (const auto& [base, ids] : claims) {
      if (label_index_.count(base) || ids.size() != 1) continue;
      derived_index_.emplace(base, *ids.begin());
    }
  }

  void index_class_labels() {
    for (const auto& cls : classes_) {
      auto key = normalize_label(cls.label);
      if (auto it = label_index_.find(key); it != label_index_.end()) {
        const auto& member = concepts_[concept_pos_.at(it->second)];
        if (member.top_class_id != cls.id) {
          throw DataError("label collision on '" + key + "' between class " + cls.id + " and concept " +
                          member.id);
        }
        continue;
      }
      auto [it, inserted] = class_index_.emplace(key, cls.id);
      if (!inserted) {
        throw DataError("label collision on '" + key + "' between classes " + it->second + " and " + cls.id);
      }
    }
  }

  void add_causal(const CausalPair& p) {
    if (p.cause_id == p.effect_id) throw DataError("causal pair " + p.cause_id + " -> itself");
    for (const auto* id : {&p.cause_id, &p.effect_id}) {
      if (!contains(*id)) throw DataError("causal pair references unknown id " + *id);
    }
    causal_.insert(p);
  }

  std::optional<ConceptId> lookup_key(const std::string& key) const {
    if (auto it = label_index_.find(key); it != label_index_.end()) return it->second;
    if (auto it = derived_index_.find(key); it != derived_index_.end()) return it->second;
    if (auto it = class_index_.find(key); it != class_index_.end()) return it->second;
    return std::nullopt;
  }

  std::vector<TopClass> classes_;
  std::vector<EventConcept> concepts_;
  std::set<CausalPair> causal_;
  std::map<std::string, ConceptId> label_index_;
  std::map<std::string, ConceptId> derived_index_;
  std::map<std::string, ConceptId> class_index_;
  std::map<ConceptId, std::size_t, std::less<>> concept_pos_;
  std::map<ConceptId, std::size_t, std::less<>> class_pos_;
};

}  // namespace eventdistill
