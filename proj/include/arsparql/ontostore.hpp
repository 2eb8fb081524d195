#pragma once

// Ontology store loaded from N-Triples (CURIEs allowed), RDFS/OWL-lite
// inference closure, and the Ontological Dictionary that maps normalized
// Arabic label forms onto ontology terms.

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arsparql/artext.hpp"

namespace arsparql {

enum class TermKind { kClass, kObjectProperty, kDatatypeProperty, kInstance };
std::string_view term_kind_name(TermKind k);

inline bool is_property_kind(TermKind k) {
  return k == TermKind::kObjectProperty || k == TermKind::kDatatypeProperty;
}

struct Label {
  std::string text;
  std::string lang;  // "" when untagged
};

struct Term {
  std::string iri;  // compact form (":Cure") when a prefix applies
  TermKind kind = TermKind::kInstance;
  std::vector<Label> labels;
};

// Object position of a statement: an IRI or a literal.
struct RdfNode {
  bool literal = false;
  std::string value;     // IRI (compact) or lexical form
  std::string lang;      // literal language tag
  std::string datatype;  // literal datatype IRI (compact)

  static RdfNode iri(std::string v) { return RdfNode{false, std::move(v), {}, {}}; }
  static RdfNode text(std::string v, std::string lang = {}) {
    return RdfNode{true, std::move(v), std::move(lang), {}};
  }
  auto operator<=>(const RdfNode &) const = default;
};

struct Statement {
  std::string subject;
  std::string predicate;
  RdfNode object;
  auto operator<=>(const Statement &) const = default;
};

// Prefix name (without ':') -> namespace IRI. Always holds rdf, rdfs, owl, xsd.
using PrefixMap = std::map<std::string, std::string>;
PrefixMap builtin_prefixes();

namespace vocab {
inline constexpr std::string_view kType = "rdf:type";
inline constexpr std::string_view kLabel = "rdfs:label";
inline constexpr std::string_view kSubClassOf = "rdfs:subClassOf";
inline constexpr std::string_view kSubPropertyOf = "rdfs:subPropertyOf";
inline constexpr std::string_view kDomain = "rdfs:domain";
inline constexpr std::string_view kRange = "rdfs:range";
// Universal domain/range marker for undeclared properties.
inline constexpr std::string_view kTop = "⊤";
// Range marker of datatype properties in schema statements.
inline constexpr std::string_view kLiteral = "LITERAL";
}  // namespace vocab

class OntologyStore {
 public:
  // Throws Error{kSyntaxError} with the 1-based line number as position.
  static OntologyStore load_ntriples(std::string_view text);
  static OntologyStore load_file(const std::string &path);

  // Fixpoint of subclass transitivity, type propagation along subclass
  // chains, symmetric mirroring, transitive composition, sub-property
  // propagation and domain/range typing of instances.
  OntologyStore infer_closure() const;

  const std::set<Statement> &statements() const { return statements_; }
  const std::map<std::string, Term> &terms() const { return terms_; }
  const Term *term(std::string_view iri) const;
  const PrefixMap &prefixes() const { return prefixes_; }
  const std::vector<std::string> &warnings() const { return warnings_; }

  bool is_class(std::string_view iri) const;
  bool is_instance(std::string_view iri) const;
  bool is_property(std::string_view iri) const;
  bool is_datatype_property(std::string_view iri) const;

  // Declared domain / range; empty means the universal marker.
  const std::set<std::string> &domain_of(std::string_view property) const;
  const std::set<std::string> &range_of(std::string_view property) const;

  // Reflexive subclass test over the closed hierarchy.
  bool is_subclass_of(std::string_view sub, std::string_view super) const;
  const std::set<std::string> &superclasses(std::string_view cls) const;
  const std::set<std::string> &types_of(std::string_view instance) const;
  const std::set<std::string> &instances_of(std::string_view cls) const;

  // Classes a term stands for when used as a triple subject/object: the
  // class itself or the types of an instance.
  std::set<std::string> classes_of(std::string_view iri) const;

  // First label in `lang` (then untagged, then any); the IRI when unlabeled.
  std::string display_label(std::string_view iri, std::string_view lang = "ar") const;

  std::string compact(std::string_view full_iri) const;

 private:
  void index();

  std::set<Statement> statements_;
  std::map<std::string, Term> terms_;
  PrefixMap prefixes_ = builtin_prefixes();
  std::vector<std::string> warnings_;

  std::map<std::string, std::set<std::string>, std::less<>> domain_, range_;
  std::map<std::string, std::set<std::string>, std::less<>> superclasses_, types_, instances_;
};

// Abstract (domain, property, range) statement. Domain/range may be
// vocab::kTop; datatype properties carry vocab::kLiteral as range.
struct SchemaStatement {
  std::string domain;
  std::string property;
  std::string range;
  auto operator<=>(const SchemaStatement &) const = default;
};

std::vector<SchemaStatement> schema_statements(const OntologyStore &store);

class SynonymLexicon {
 public:
  // TSV "word<TAB>syn1,syn2"; '#' comments. Normalized, symmetric.
  static SynonymLexicon parse(std::string_view text);

  void add(std::string_view a, std::string_view b);
  const std::set<std::string> &synonyms(std::string_view normalized_word) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::string, std::set<std::string>, std::less<>> map_;
};

enum class MatchTier { kExact = 0, kSynonym = 1, kStem = 2, kSkeleton = 3 };
std::string_view match_tier_name(MatchTier t);

struct DictMatch {
  std::string iri;
  TermKind kind = TermKind::kInstance;
  MatchTier tier = MatchTier::kExact;
  std::size_t label_length = 0;  // code points of the matched label form

  bool operator==(const DictMatch &) const = default;
};

class OntologicalDictionary {
 public:
  struct Options {
    // Accepted label language tags; "" stands for untagged labels.
    std::set<std::string> languages{"ar", ""};
  };

  static OntologicalDictionary build(const OntologyStore &store, const SynonymLexicon &syn,
                                     const TextProcessor &text);
  static OntologicalDictionary build(const OntologyStore &store, const SynonymLexicon &syn,
                                     const TextProcessor &text, const Options &options);

  // Best tier per term; ordered by tier, label length (desc), IRI.
  std::vector<DictMatch> lookup(const std::vector<std::string> &phrase) const;

  using KeyMap = std::unordered_map<std::string, std::vector<DictMatch>>;
  const KeyMap &keys(MatchTier tier) const { return tiers_[static_cast<int>(tier)]; }
  std::size_t size() const;
  const TextProcessor &text() const { return text_; }

 private:
  void insert(MatchTier tier, const std::string &key, const Term &term, std::size_t len);

  TextProcessor text_;
  KeyMap tiers_[4];
};

}  // namespace arsparql
