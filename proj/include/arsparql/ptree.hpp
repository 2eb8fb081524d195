#pragma once

// Bracketed constituency trees, e.g. "(S (NP (NN علاج)) (PUNC ؟))".
// Nodes are stored flat in pre-order; a node's id is its pre-order index.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arsparql {

using NodeId = int;

// Half-open range [begin, end) over the leaf-token sequence.
struct Span {
  int begin = 0;
  int end = 0;

  bool contains(const Span &o) const { return begin <= o.begin && o.end <= end; }
  bool operator==(const Span &) const = default;
};

struct TreeNode {
  NodeId id = 0;
  std::string tag;
  std::optional<std::string> token;  // present iff leaf
  std::vector<NodeId> children;
  NodeId parent = -1;
  NodeId last = 0;  // largest pre-order id in this subtree
  Span span;
  int depth = 0;

  bool is_leaf() const { return children.empty(); }
};

// Tag predicates shared by the extraction stages.
bool is_noun_tag(std::string_view tag);       // contains "NN"
bool is_adjective_tag(std::string_view tag);  // contains "JJ"
bool is_punct_tag(std::string_view tag);      // "PUNC"

class ParseTree {
 public:
  // Throws Error{kEmptyInput | kUnbalancedBrackets | kLeafWithoutToken |
  // kMalformedTree}; the error position is a byte offset into `text`.
  static ParseTree parse(std::string_view text);

  const TreeNode &root() const { return nodes_.front(); }
  const TreeNode &node(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }

  // Pre-order node list; preorder()[k].id == k.
  const std::vector<TreeNode> &preorder() const { return nodes_; }

  // Leaf node ids in surface order.
  const std::vector<NodeId> &leaves() const { return leaves_; }
  const TreeNode &leaf(int index) const { return nodes_[leaves_[index]]; }
  std::vector<std::string> leaf_tokens() const;

  // Tokens / leaf ids dominated by a node, in surface order.
  std::vector<std::string> tokens(NodeId id) const;
  std::vector<NodeId> leaf_ids(NodeId id) const;

  // True when `ancestor` dominates `node` (reflexive).
  bool dominates(NodeId ancestor, NodeId node) const;

  NodeId lca(NodeId a, NodeId b) const;

  // Leaf indices strictly between the spans of `a` and `b` that lie under
  // lca(a, b). Requires a before b in pre-order and no dominance.
  std::vector<int> path_leaves(NodeId a, NodeId b) const;
  std::vector<std::string> path_tokens(NodeId a, NodeId b) const;

  // Canonical single-space bracketed form.
  std::string serialize() const;

 private:
  void check(NodeId id) const;
  void serialize_into(NodeId id, std::string &out) const;

  std::vector<TreeNode> nodes_;
  std::vector<NodeId> leaves_;
};

}  // namespace arsparql
