#pragma once

// Noun-phrase extraction, NP pairing, relation words along LCA paths with
// Conjunctive-Head distribution, and head/modifier splitting.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arsparql/ptree.hpp"

namespace arsparql {

struct NounPhrase {
  NodeId node = -1;
  int preorder_pos = -1;  // == node
  Span span;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::vector<std::string> premodifiers;
  std::vector<std::string> head_tokens;  // compound head, e.g. "ارتفاع ضغط الدم"
  std::vector<std::string> postmodifiers;

  std::string text() const;
  std::string head() const;
};

enum class Conjunction { kAnd, kOr };
std::string_view conjunction_name(Conjunction c);

struct ConjunctiveHead {
  NodeId node = -1;
  NodeId cc_leaf = -1;
  std::string token;
  Conjunction kind = Conjunction::kAnd;
  std::vector<NodeId> branches;  // non-CC children, surface order
};

struct IntermediateTriple {
  NounPhrase subject;
  std::vector<std::string> predicate_tokens;  // raw surface words
  std::vector<int> predicate_leaves;          // leaf indices of predicate_tokens
  NounPhrase object;
  std::optional<Conjunction> conjunction_origin;
  NodeId conjunctive_head = -1;  // set with conjunction_origin
};

// Noun leaves plus NP nodes whose leaves are all nominal, minus anything
// dominated by another result; pre-order. Head/modifier fields are left
// empty. Throws kNoNounPhrases.
std::vector<NounPhrase> extract_nps(const ParseTree &tree);

std::vector<std::pair<NounPhrase, NounPhrase>> pair_nps(const std::vector<NounPhrase> &nps);

// Internal nodes with a direct CC leaf child, outermost first.
std::vector<ConjunctiveHead> find_conjunctive_heads(const ParseTree &tree);

std::vector<IntermediateTriple> build_intermediate_triples(const ParseTree &tree,
                                                           const std::vector<NounPhrase> &nps);

// Fills premodifiers / head_tokens / postmodifiers. Throws kNoHeadFound.
NounPhrase split_head_modifiers(NounPhrase np);

}  // namespace arsparql
