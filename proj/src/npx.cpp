#include "arsparql/npx.hpp"

#include <algorithm>

#include "arsparql/artext.hpp"
#include "arsparql/error.hpp"

namespace arsparql {

std::string NounPhrase::text() const { return join(tokens); }
std::string NounPhrase::head() const { return join(head_tokens); }

std::string_view conjunction_name(Conjunction c) { return c == Conjunction::kAnd ? "AND" : "OR"; }

namespace {

NounPhrase make_np(const ParseTree &tree, NodeId id) {
  NounPhrase np;
  np.node = id;
  np.preorder_pos = id;
  np.span = tree.node(id).span;
  for (NodeId leaf : tree.leaf_ids(id)) {
    np.tokens.push_back(*tree.node(leaf).token);
    np.tags.push_back(tree.node(leaf).tag);
  }
  return np;
}

// Adjectives count as nominal so that "الأمراض المزمنة" stays one phrase; at
// least one true noun is still required.
bool all_nominal(const ParseTree &tree, NodeId id) {
  bool has_noun = false;
  for (NodeId leaf : tree.leaf_ids(id)) {
    const std::string &tag = tree.node(leaf).tag;
    if (is_noun_tag(tag)) {
      has_noun = true;
    } else if (!is_adjective_tag(tag)) {
      return false;
    }
  }
  return has_noun;
}

bool is_head_noun(const std::string &token, const std::string &tag) {
  return is_noun_tag(tag) && !is_comparative(normalize(token));
}

}  // namespace

std::vector<NounPhrase> extract_nps(const ParseTree &tree) {
  std::vector<NodeId> found;
  for (const TreeNode &n : tree.preorder()) {
    if (n.is_leaf()) {
      if (is_noun_tag(n.tag)) found.push_back(n.id);
    } else if (n.tag == "NP" && all_nominal(tree, n.id)) {
      found.push_back(n.id);
    }
  }
  std::vector<NounPhrase> out;
  for (NodeId id : found) {
    bool dominated = std::any_of(found.begin(), found.end(), [&](NodeId other) {
      return other != id && tree.dominates(other, id);
    });
    if (!dominated) out.push_back(make_np(tree, id));
  }
  if (out.empty()) throw Error(ErrorCode::kNoNounPhrases, "no noun phrases in parse tree");
  return out;
}

std::vector<std::pair<NounPhrase, NounPhrase>> pair_nps(const std::vector<NounPhrase> &nps) {
  std::vector<std::pair<NounPhrase, NounPhrase>> out;
  for (std::size_t i = 0; i + 1 < nps.size(); ++i) out.emplace_back(nps[i], nps[i + 1]);
  return out;
}

std::vector<ConjunctiveHead> find_conjunctive_heads(const ParseTree &tree) {
  std::vector<ConjunctiveHead> out;
  for (const TreeNode &n : tree.preorder()) {
    if (n.is_leaf()) continue;
    auto cc = std::find_if(n.children.begin(), n.children.end(), [&](NodeId c) {
      return tree.node(c).is_leaf() && tree.node(c).tag == "CC";
    });
    if (cc == n.children.end()) continue;
    ConjunctiveHead ch;
    ch.node = n.id;
    ch.cc_leaf = *cc;
    ch.token = *tree.node(*cc).token;
    ch.kind = normalize(ch.token) == normalize("أو") ? Conjunction::kOr : Conjunction::kAnd;
    for (NodeId c : n.children) {
      const TreeNode &child = tree.node(c);
      if (child.is_leaf() && (child.tag == "CC" || is_punct_tag(child.tag))) continue;
      ch.branches.push_back(c);
    }
    out.push_back(std::move(ch));
  }
  return out;
}

namespace {

int branch_index(const ParseTree &tree, const ConjunctiveHead &ch, NodeId id) {
  for (std::size_t i = 0; i < ch.branches.size(); ++i)
    if (tree.dominates(ch.branches[i], id)) return static_cast<int>(i);
  return -1;
}

IntermediateTriple make_triple(const ParseTree &tree, const NounPhrase &a, const NounPhrase &b,
                               const std::vector<int> &leaves) {
  IntermediateTriple t;
  t.subject = a;
  t.object = b;
  for (int i : leaves) {
    if (is_punct_tag(tree.leaf(i).tag)) continue;
    t.predicate_leaves.push_back(i);
    t.predicate_tokens.push_back(*tree.leaf(i).token);
  }
  return t;
}

}  // namespace

std::vector<IntermediateTriple> build_intermediate_triples(const ParseTree &tree,
                                                           const std::vector<NounPhrase> &nps) {
  const std::vector<ConjunctiveHead> heads = find_conjunctive_heads(tree);
  auto head_at = [&](NodeId id) -> const ConjunctiveHead * {
    for (const auto &ch : heads)
      if (ch.node == id) return &ch;
    return nullptr;
  };

  // Pairs whose NPs sit in different conjuncts of a Conjunctive Head are
  // replaced by links from the upper-level NP to each conjunct.
  std::vector<std::pair<NodeId, NodeId>> dropped;
  std::vector<const ConjunctiveHead *> active;
  for (const auto &[a, b] : pair_nps(nps)) {
    const ConjunctiveHead *ch = head_at(tree.lca(a.node, b.node));
    if (!ch) continue;
    int ba = branch_index(tree, *ch, a.node);
    int bb = branch_index(tree, *ch, b.node);
    if (ba >= 0 && bb >= 0 && ba != bb) {
      dropped.emplace_back(a.node, b.node);
      if (std::find(active.begin(), active.end(), ch) == active.end()) active.push_back(ch);
    }
  }

  std::vector<IntermediateTriple> out;
  for (const ConjunctiveHead *ch : active) {
    const Span ch_span = tree.node(ch->node).span;
    const NounPhrase *upper = nullptr;
    for (const auto &np : nps)
      if (np.span.end <= ch_span.begin) upper = &np;
    if (!upper) {
      for (const auto &np : nps) {
        if (np.span.begin >= ch_span.end) {
          upper = &np;
          break;
        }
      }
    }
    if (!upper) continue;

    for (std::size_t k = 0; k < ch->branches.size(); ++k) {
      auto first = std::find_if(nps.begin(), nps.end(), [&](const NounPhrase &np) {
        return tree.dominates(ch->branches[k], np.node);
      });
      if (first == nps.end()) continue;
      const NounPhrase &s = upper->node < first->node ? *upper : *first;
      const NounPhrase &o = upper->node < first->node ? *first : *upper;
      std::vector<int> leaves;
      for (int i : tree.path_leaves(s.node, o.node)) {
        NodeId leaf = tree.leaves()[i];
        if (leaf == ch->cc_leaf) continue;
        int b = branch_index(tree, *ch, leaf);
        if (b >= 0 && b != static_cast<int>(k)) continue;
        leaves.push_back(i);
      }
      IntermediateTriple t = make_triple(tree, s, o, leaves);
      t.conjunction_origin = ch->kind;
      t.conjunctive_head = ch->node;
      out.push_back(std::move(t));
    }
  }

  for (const auto &[a, b] : pair_nps(nps)) {
    std::pair<NodeId, NodeId> key{a.node, b.node};
    if (std::find(dropped.begin(), dropped.end(), key) != dropped.end()) continue;
    bool linked = std::any_of(out.begin(), out.end(), [&](const IntermediateTriple &t) {
      return t.subject.node == a.node && t.object.node == b.node;
    });
    if (linked) continue;
    out.push_back(make_triple(tree, a, b, tree.path_leaves(a.node, b.node)));
  }

  std::stable_sort(out.begin(), out.end(), [](const auto &x, const auto &y) {
    return std::pair(x.subject.node, x.object.node) < std::pair(y.subject.node, y.object.node);
  });
  return out;
}

NounPhrase split_head_modifiers(NounPhrase np) {
  const std::size_t n = np.tokens.size();
  if (n == 0) throw Error(ErrorCode::kNoHeadFound, "empty noun phrase");
  if (np.tags.size() != n) np.tags.resize(n, "NN");
  std::size_t h = 0;
  while (h < n && !is_head_noun(np.tokens[h], np.tags[h])) ++h;
  if (h == n) throw Error(ErrorCode::kNoHeadFound, "no head noun in '" + np.text() + "'");
  std::size_t e = h + 1;
  while (e < n && is_head_noun(np.tokens[e], np.tags[e])) ++e;
  np.premodifiers.assign(np.tokens.begin(), np.tokens.begin() + h);
  np.head_tokens.assign(np.tokens.begin() + h, np.tokens.begin() + e);
  np.postmodifiers.assign(np.tokens.begin() + e, np.tokens.end());
  return np;
}

}  // namespace arsparql
