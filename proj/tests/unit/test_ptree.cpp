#include <doctest.h>

#include <algorithm>

#include "arsparql/error.hpp"
#include "arsparql/ptree.hpp"
#include "support.hpp"

using namespace arsparql;

namespace {

ErrorCode parse_error(const std::string &text) {
  try {
    ParseTree::parse(text);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected a parse error for " << text);
  return ErrorCode::kIoError;
}

NodeId find_np(const ParseTree &t, const std::string &text) {
  for (const auto &n : t.preorder()) {
    std::string joined;
    for (const auto &tok : t.tokens(n.id)) joined += (joined.empty() ? "" : " ") + tok;
    if ((n.tag == "NP" || n.tag.find("NN") != std::string::npos) && joined == text) return n.id;
  }
  return -1;
}

}  // namespace

TEST_SUITE("ptree") {
  TEST_CASE("minimal tree") {
    const ParseTree t = ParseTree::parse("(NP (NN علاج))");
    CHECK(t.root().tag == "NP");
    CHECK(t.root().id == 0);
    REQUIRE(t.leaves().size() == 1);
    CHECK(t.leaves()[0] == 1);
    CHECK(*t.leaf(0).token == "علاج");
    CHECK(t.root().span == Span{0, 1});
  }

  TEST_CASE("malformed input") {
    CHECK(parse_error("(NP (NN a)") == ErrorCode::kUnbalancedBrackets);
    CHECK(parse_error("(NP (NN a)))") == ErrorCode::kUnbalancedBrackets);
    CHECK(parse_error("") == ErrorCode::kEmptyInput);
    CHECK(parse_error("   \n") == ErrorCode::kEmptyInput);
    CHECK(parse_error("(NP (NN))") == ErrorCode::kLeafWithoutToken);
    CHECK(parse_error("(NP (NN a b))") == ErrorCode::kMalformedTree);
  }

  TEST_CASE("unbalanced bracket position is reported") {
    try {
      ParseTree::parse("(NP (NN a)");
      FAIL("no error");
    } catch (const Error &e) {
      CHECK(e.position() == 10);
    }
  }

  TEST_CASE("gout tree") {
    const ParseTree t = ParseTree::parse(testsupport::slurp("trees/gout.tree"));
    const auto tokens = t.leaf_tokens();
    for (const char *w : {"علاج", "المرض", "داء", "الملوك"})
      CHECK(std::find(tokens.begin(), tokens.end(), w) != tokens.end());
    const NodeId np1 = find_np(t, "علاج"), np2 = find_np(t, "المرض"),
                 np3 = find_np(t, "داء الملوك");
    REQUIRE(np1 >= 0);
    REQUIRE(np2 >= 0);
    REQUIRE(np3 >= 0);
    CHECK(t.node(np3).tag == "NP");
    // pre-order places them NP1, NP2, NP3
    CHECK(np1 < np2);
    CHECK(np2 < np3);

    const NodeId clause = t.lca(np2, np3);
    CHECK(t.dominates(clause, np2));
    CHECK(t.dominates(clause, np3));
    const auto under = t.tokens(clause);
    CHECK(std::search(under.begin(), under.end(), tokens.begin() + 3, tokens.begin() + 7) !=
          under.end());  // "الذي يسمى داء الملوك"

    CHECK(t.path_tokens(np1, np2).empty());
    CHECK(t.path_tokens(np2, np3) == std::vector<std::string>{"الذي", "يسمى"});
    CHECK(t.path_tokens(np3, np2) == std::vector<std::string>{"الذي", "يسمى"});
  }

  TEST_CASE("lca identity and errors") {
    const ParseTree t = ParseTree::parse("(S (NP (NN a)) (VP (VB b) (NP (NN c))))");
    for (NodeId i = 0; i < static_cast<NodeId>(t.size()); ++i) CHECK(t.lca(i, i) == i);
    CHECK_THROWS_AS(t.lca(0, 99), Error);
    try {
      t.lca(-1, 0);
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kNodeNotInTree);
    }
    try {
      t.path_tokens(0, 1);
      FAIL("no error");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::kDominanceViolation);
    }
  }

  TEST_CASE("adjacent siblings have no path words") {
    const ParseTree t = ParseTree::parse("(NP (NN a) (NN b))");
    CHECK(t.path_tokens(1, 2).empty());
  }

  TEST_CASE("pre-order against recursive oracle") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
      const int n = 1 + static_cast<int>(seed % 10);
      const auto rt = testsupport::random_tree(n, seed);
      const ParseTree t = ParseTree::parse(rt.text);
      REQUIRE(t.size() == rt.preorder_tags.size());
      for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(t.preorder()[k].id == static_cast<NodeId>(k));
        CHECK(t.preorder()[k].tag == rt.preorder_tags[k]);
        CHECK(t.preorder()[k].parent == rt.parent[k]);
      }
    }
  }

  TEST_CASE("node invariants on fixture trees") {
    for (const auto &text : testsupport::fixture_trees()) {
      const ParseTree t = ParseTree::parse(text);
      CHECK(t.root().span == Span{0, static_cast<int>(t.leaves().size())});
      for (const auto &n : t.preorder()) {
        CHECK(n.token.has_value() == n.children.empty());
        if (n.children.empty()) continue;
        CHECK(t.node(n.children.front()).span.begin == n.span.begin);
        CHECK(t.node(n.children.back()).span.end == n.span.end);
        for (std::size_t i = 1; i < n.children.size(); ++i)
          CHECK(t.node(n.children[i - 1]).span.end == t.node(n.children[i]).span.begin);
      }
      for (std::size_t i = 1; i < t.leaves().size(); ++i)
        CHECK(t.leaf(static_cast<int>(i - 1)).span.begin < t.leaf(static_cast<int>(i)).span.begin);
    }
  }

  TEST_CASE("serialize is a fixpoint") {
    for (const auto &text : testsupport::fixture_trees()) {
      const std::string once = ParseTree::parse(text).serialize();
      CHECK(ParseTree::parse(once).serialize() == once);
    }
    CHECK(ParseTree::parse("(NP\n  (NN   a)\t(NN b) )").serialize() == "(NP (NN a) (NN b))");
  }

  TEST_CASE("path words are contiguous leaves") {
    for (const auto &text : testsupport::fixture_trees()) {
      const ParseTree t = ParseTree::parse(text);
      for (NodeId a = 0; a < static_cast<NodeId>(t.size()); ++a) {
        for (NodeId b = a + 1; b < static_cast<NodeId>(t.size()); ++b) {
          if (t.dominates(a, b) || t.dominates(b, a)) continue;
          const auto idx = t.path_leaves(a, b);
          for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i] == idx[i - 1] + 1);
        }
      }
    }
  }

  TEST_CASE("lca: every shape up to 12 nodes") {
    const auto r = testsupport::lca_exhaustive(12);
    INFO(r.detail);
    CHECK(r.ok);
    CHECK(r.checked > 0);
  }

  TEST_CASE("lca: random shapes of 13 to 15 nodes with dominance checks") {
    const auto r = testsupport::lca_random(13, 15, 2000, 20240611);
    INFO(r.detail);
    CHECK(r.ok);
  }
}
