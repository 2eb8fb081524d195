#include "arsparql/ptree.hpp"

#include <algorithm>
#include <cctype>

#include "arsparql/error.hpp"

namespace arsparql {

bool is_noun_tag(std::string_view tag) { return tag.find("NN") != std::string_view::npos; }
bool is_adjective_tag(std::string_view tag) { return tag.find("JJ") != std::string_view::npos; }
bool is_punct_tag(std::string_view tag) { return tag == "PUNC"; }

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

  std::string atom() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseTree ParseTree::parse(std::string_view text) {
  BracketReader in(text);
  if (in.at_end()) throw Error(ErrorCode::kEmptyInput, "empty tree text", 0);
  if (in.peek() != '(')
    throw Error(ErrorCode::kMalformedTree, "tree must start with '('", static_cast<long>(in.pos()));

  ParseTree tree;
  // Stack of open internal nodes.
  std::vector<NodeId> open;
  int leaf_count = 0;

  while (true) {
    char c = in.peek();
    if (c == '\0') {
      throw Error(ErrorCode::kUnbalancedBrackets,
                  "unexpected end of input: " + std::to_string(open.size()) +
                      " unclosed bracket(s)",
                  static_cast<long>(in.pos()));
    }
    if (c == ')') {
      if (open.empty())
        throw Error(ErrorCode::kUnbalancedBrackets, "unmatched ')'",
                    static_cast<long>(in.pos()));
      NodeId id = open.back();
      open.pop_back();
      TreeNode &n = tree.nodes_[id];
      if (n.children.empty())
        throw Error(ErrorCode::kLeafWithoutToken, "node '" + n.tag + "' has no token",
                    static_cast<long>(in.pos()));
      n.span.end = leaf_count;
      n.last = static_cast<NodeId>(tree.nodes_.size()) - 1;
      in.advance();
      if (open.empty()) break;
      continue;
    }
    if (c != '(') {
      throw Error(ErrorCode::kMalformedTree, "token outside a leaf bracket",
                  static_cast<long>(in.pos()));
    }

    std::size_t open_pos = in.pos();
    in.advance();
    std::string tag = in.atom();
    if (tag.empty()) {
      throw Error(in.peek() == '\0' ? ErrorCode::kUnbalancedBrackets : ErrorCode::kMalformedTree,
                  "missing tag after '('", static_cast<long>(open_pos));
    }

    TreeNode node;
    node.id = static_cast<NodeId>(tree.nodes_.size());
    node.tag = std::move(tag);
    node.parent = open.empty() ? -1 : open.back();
    node.depth = static_cast<int>(open.size());
    node.span.begin = leaf_count;
    if (!open.empty()) {
      if (tree.nodes_[open.back()].token)
        throw Error(ErrorCode::kMalformedTree, "leaf has children", static_cast<long>(open_pos));
      tree.nodes_[open.back()].children.push_back(node.id);
    }

    char next = in.peek();
    if (next == '(') {
      tree.nodes_.push_back(std::move(node));
      open.push_back(tree.nodes_.back().id);
      continue;
    }
    if (next == ')') {
      throw Error(ErrorCode::kLeafWithoutToken, "leaf '" + node.tag + "' has no token",
                  static_cast<long>(in.pos()));
    }
    if (next == '\0') {
      throw Error(ErrorCode::kUnbalancedBrackets, "unexpected end of input",
                  static_cast<long>(in.pos()));
    }
    node.token = in.atom();
    char close = in.peek();
    if (close == '\0')
      throw Error(ErrorCode::kUnbalancedBrackets, "unexpected end of input",
                  static_cast<long>(in.pos()));
    if (close != ')')
      throw Error(ErrorCode::kMalformedTree,
                  "leaf '" + node.tag + "' must contain exactly one token",
                  static_cast<long>(in.pos()));
    in.advance();
    node.span.end = ++leaf_count;
    node.last = node.id;
    tree.leaves_.push_back(node.id);
    bool top_level = open.empty();
    tree.nodes_.push_back(std::move(node));
    if (top_level) break;
  }

  if (!in.at_end())
    throw Error(ErrorCode::kUnbalancedBrackets, "trailing input after tree",
                static_cast<long>(in.pos()));
  return tree;
}

const TreeNode &ParseTree::node(NodeId id) const {
  check(id);
  return nodes_[id];
}

void ParseTree::check(NodeId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
    throw Error(ErrorCode::kNodeNotInTree, "node id " + std::to_string(id) + " not in tree", id);
}

std::vector<std::string> ParseTree::leaf_tokens() const {
  std::vector<std::string> out;
  out.reserve(leaves_.size());
  for (NodeId id : leaves_) out.push_back(*nodes_[id].token);
  return out;
}

std::vector<NodeId> ParseTree::leaf_ids(NodeId id) const {
  const TreeNode &n = node(id);
  return {leaves_.begin() + n.span.begin, leaves_.begin() + n.span.end};
}

std::vector<std::string> ParseTree::tokens(NodeId id) const {
  std::vector<std::string> out;
  for (NodeId leaf : leaf_ids(id)) out.push_back(*nodes_[leaf].token);
  return out;
}

bool ParseTree::dominates(NodeId ancestor, NodeId id) const {
  check(ancestor);
  check(id);
  // Pre-order numbering: descendants occupy a contiguous id range.
  return ancestor <= id && id <= nodes_[ancestor].last;
}

NodeId ParseTree::lca(NodeId a, NodeId b) const {
  check(a);
  check(b);
  while (nodes_[a].depth > nodes_[b].depth) a = nodes_[a].parent;
  while (nodes_[b].depth > nodes_[a].depth) b = nodes_[b].parent;
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

std::vector<int> ParseTree::path_leaves(NodeId a, NodeId b) const {
  check(a);
  check(b);
  if (dominates(a, b) || dominates(b, a))
    throw Error(ErrorCode::kDominanceViolation,
                "path requested between nodes " + std::to_string(a) + " and " +
                    std::to_string(b) + " where one dominates the other");
  if (a > b) std::swap(a, b);
  const Span top = nodes_[lca(a, b)].span;
  std::vector<int> out;
  for (int i = nodes_[a].span.end; i < nodes_[b].span.begin; ++i) {
    if (i >= top.begin && i < top.end) out.push_back(i);
  }
  return out;
}

std::vector<std::string> ParseTree::path_tokens(NodeId a, NodeId b) const {
  std::vector<std::string> out;
  for (int i : path_leaves(a, b)) out.push_back(*leaf(i).token);
  return out;
}

void ParseTree::serialize_into(NodeId id, std::string &out) const {
  const TreeNode &n = nodes_[id];
  out += '(';
  out += n.tag;
  if (n.token) {
    out += ' ';
    out += *n.token;
  }
  for (NodeId c : n.children) {
    out += ' ';
    serialize_into(c, out);
  }
  out += ')';
}

std::string ParseTree::serialize() const {
  std::string out;
  serialize_into(0, out);
  return out;
}

}  // namespace arsparql
