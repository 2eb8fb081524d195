#pragma once

// Intermediate Triple -> RDF triple: dictionary matching, completion of a
// single missing part from schema statements, domain/range validation and
// chooser-based resolution of what remains ambiguous.

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arsparql/npx.hpp"
#include "arsparql/ontostore.hpp"

namespace arsparql {

struct TriplePart {
  enum class Kind { kMatched, kLiteral, kMissing };

  Kind kind = Kind::kMissing;
  std::string value;  // IRI when matched, surface text when literal
  TermKind term_kind = TermKind::kInstance;
  MatchTier tier = MatchTier::kExact;
  bool completed = false;  // filled in by complete_triple

  static TriplePart missing() { return {}; }
  static TriplePart literal(std::string text);
  static TriplePart matched(const DictMatch &m);
  static TriplePart term(std::string iri, TermKind kind);

  bool is_missing() const { return kind == Kind::kMissing; }
  bool is_matched() const { return kind == Kind::kMatched; }
  bool is_literal() const { return kind == Kind::kLiteral; }
  std::string str() const;  // ":Cure", "\"داء الملوك\"" or "?"
  bool operator==(const TriplePart &) const = default;
};

// Lower is better: worst dictionary tier over the parts, then 1 when a part
// had to be completed.
struct Score {
  int worst_tier = 0;
  int completion_penalty = 0;
  auto operator<=>(const Score &) const = default;
};

struct CandidateRdfTriple {
  TriplePart subject, predicate, object;
  Score score;
  bool valid = false;

  // Carried over from the Intermediate Triple for query assembly.
  NodeId subject_np = -1;
  NodeId object_np = -1;
  std::vector<int> predicate_leaves;
  std::optional<Conjunction> conjunction_origin;
  NodeId conjunctive_head = -1;

  int missing_count() const;
  std::string str() const;  // "<:Cure, :cures, :Disease>"
};

// Class / instance matches for a noun phrase: the whole phrase, then the head,
// then the longest (leftmost) sub-span that matches anything.
std::vector<DictMatch> match_noun_phrase(const NounPhrase &np, const OntologicalDictionary &dict);

// Property matches for relation words after stop-word removal; empty when
// every word is a stop-word or nothing matches.
std::vector<DictMatch> match_predicate(const std::vector<std::string> &tokens,
                                       const OntologicalDictionary &dict);

// One candidate per combination of part matches. Unmatched parts are MISSING,
// except an unmatched object under a datatype-property reading, which becomes
// a literal with the object's surface text.
std::vector<CandidateRdfTriple> match_intermediate(const IntermediateTriple &it,
                                                   const OntologicalDictionary &dict);

// Candidates for the single missing part, in schema-statement order. A
// candidate without missing parts is returned unchanged.
// Throws kTooManyMissing.
std::vector<CandidateRdfTriple> complete_triple(const CandidateRdfTriple &c,
                                                const OntologyStore &store);

bool validate_triple(const CandidateRdfTriple &c, const OntologyStore &store);

// Sets `valid` on each candidate and returns the valid ones that share the best
// score, in input order.
std::vector<CandidateRdfTriple> best_valid(std::vector<CandidateRdfTriple> candidates,
                                           const OntologyStore &store);

struct ChoiceContext {
  std::string question;
  std::size_t triple_index = 0;
  std::string intermediate;  // "<المرض | الذي يصيب | البنكرياس>"
};

// Returns the chosen index, or nullopt to abort.
using Chooser = std::function<std::optional<std::size_t>(
    const ChoiceContext &, const std::vector<CandidateRdfTriple> &)>;

// Highest score wins; a tie at the top aborts.
Chooser batch_chooser();

// Throws kNoValidTriple for an empty list or an aborted / out-of-range choice.
CandidateRdfTriple resolve(const std::vector<CandidateRdfTriple> &candidates,
                           const Chooser &chooser, const ChoiceContext &ctx = {});

}  // namespace arsparql
