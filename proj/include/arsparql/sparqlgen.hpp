#pragma once

// Target and modifier extraction, query assembly with variable substitution,
// negation / disjunction rewriting, and a serializer plus canonicalizer for
// the emitted SPARQL subset.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "arsparql/mapper.hpp"
#include "arsparql/npx.hpp"
#include "arsparql/ontostore.hpp"
#include "arsparql/ptree.hpp"

namespace arsparql {

// Normalized one-token-per-line word lists ('#' comments).
class WordList {
 public:
  WordList() = default;
  explicit WordList(const std::vector<std::string> &words);
  static WordList parse(std::string_view text);
  static const WordList &question_default();
  static const WordList &order_default();

  bool contains(std::string_view token) const;  // normalizes `token`
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

struct QueryTarget {
  NounPhrase np;
  int trigger_leaf = -1;
  std::string trigger;
  std::string term;  // IRI, filled after matching
  TermKind term_kind = TermKind::kInstance;
  std::string variable_name = "?target";
};

// First NP starting at or after the first question/order word (WP-tagged
// question words only), else after the first WP leaf. Throws kNoTargetFound.
QueryTarget extract_target(const ParseTree &tree, const std::vector<NounPhrase> &nps,
                           const WordList &question_words, const WordList &order_words);

enum class ModifierKind { kNegation, kConjunction, kDisjunction };
std::string_view modifier_kind_name(ModifierKind k);

struct ModifierDescriptor {
  ModifierKind kind;
  std::string trigger_token;
  int position = -1;  // leaf index
};

struct ModifierScan {
  std::vector<ModifierDescriptor> descriptors;
  std::vector<std::string> unsupported;  // comparative / superlative tokens
};

ModifierScan extract_modifiers(const ParseTree &tree);

// ---------------------------------------------------------------------------
// Query model

struct QTerm {
  enum class Kind { kIri, kVar, kLiteral };
  Kind kind = Kind::kIri;
  std::string value;  // IRI text, variable name without '?', literal lexical form
  std::string lang;   // literals parsed from gold queries
  std::string datatype;

  static QTerm iri(std::string v) { return {Kind::kIri, std::move(v), {}, {}}; }
  static QTerm var(std::string v) { return {Kind::kVar, std::move(v), {}, {}}; }
  static QTerm literal(std::string v) { return {Kind::kLiteral, std::move(v), {}, {}}; }
  bool is_var() const { return kind == Kind::kVar; }
  std::string str() const;
  bool operator==(const QTerm &) const = default;
};

struct BasicTriple {
  QTerm s, p, o;
  bool operator==(const BasicTriple &) const = default;
};

struct FilterExpr {
  enum class Kind { kEquals, kNotBound };
  Kind kind = Kind::kEquals;
  std::string var;
  QTerm value;  // kEquals only
  bool operator==(const FilterExpr &) const = default;
};

struct Pattern {
  enum class Kind { kTriple, kFilter, kOptional, kUnion, kGroup };
  Kind kind = Kind::kTriple;
  BasicTriple triple;
  FilterExpr filter;
  std::vector<Pattern> body;                   // kOptional, kGroup
  std::vector<std::vector<Pattern>> branches;  // kUnion

  static Pattern of(BasicTriple t);
  static Pattern of(FilterExpr f);
  static Pattern optional(std::vector<Pattern> body);
  static Pattern union_of(std::vector<std::vector<Pattern>> branches);
  static Pattern group(std::vector<Pattern> body);
};

struct SparqlQuery {
  std::vector<std::string> select_vars;  // without '?'
  std::vector<Pattern> patterns;
  PrefixMap prefixes;  // declared in parsed text; serialize uses its own argument
};

// Assembles the SELECT query from the chosen triples and the target. Throws
// kTargetUnmatched, kUnsupportedModifier when a negation is not attached to
// any relation, and kEmptyBranch.
SparqlQuery build_query(const std::vector<CandidateRdfTriple> &triples, const QueryTarget &target,
                        const std::vector<ModifierDescriptor> &mods, const OntologyStore &store);

// OPTIONAL { s p ?var . FILTER(?var = o) } followed by FILTER(!bound(?var)).
// A class object is tested with "?var rdf:type o" instead of equality.
// Throws kContractViolation when `negated` is false or the object is a variable.
std::vector<Pattern> apply_negation(const BasicTriple &triple, bool negated,
                                    const std::string &fresh_var, bool object_is_class);

// Throws kEmptyBranch when fewer than two non-empty branches are given.
Pattern apply_disjunction(const std::vector<std::vector<Pattern>> &branches);

// Only prefixes used by the query are declared, sorted by name.
std::string serialize(const SparqlQuery &q, const PrefixMap &prefixes);

// Parses the emitted subset. Throws kOutOfSubset.
SparqlQuery parse_sparql(std::string_view text);

// Normal form for equivalence checks: IRIs expanded through the declared
// prefixes, then `context` prefixes, then the rdf/rdfs/owl/xsd built-ins;
// nested groups flattened; variables renamed by structural refinement;
// conjunctions and UNION branches sorted and de-duplicated.
std::string canonicalize(std::string_view text, const PrefixMap &context = {});
std::string canonicalize(const SparqlQuery &q, const PrefixMap &context = {});

// Variables occurring anywhere in the patterns, first occurrence order.
std::vector<std::string> query_variables(const SparqlQuery &q);

}  // namespace arsparql
