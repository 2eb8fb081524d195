#pragma once

// Fixture access and property checks shared by the unit suites and the
// acceptance runner.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "arsparql/eval.hpp"
#include "arsparql/ontostore.hpp"
#include "arsparql/pipeline.hpp"

namespace testsupport {

std::string data_path(std::string_view relative);
std::string slurp(std::string_view relative);

arsparql::PipelineConfig diseases_config();
arsparql::PipelineConfig geography_config();
const arsparql::Pipeline &diseases();
const arsparql::Pipeline &geography();

std::vector<arsparql::DatasetCase> diseases_gold();
std::vector<arsparql::DatasetCase> geography_gold();

// Every bracketed tree shipped in data/ (tree files and dataset records).
std::vector<std::string> fixture_trees();

struct PropertyResult {
  bool ok = true;
  std::size_t checked = 0;
  std::string detail;  // first counterexample

  void fail(std::string what) {
    if (ok) detail = std::move(what);
    ok = false;
  }
};

// Every ordered tree shape with 1..max_nodes nodes; tags cycle through a
// four-symbol alphabet. lca is compared with the root-path intersection
// oracle for every ordered node pair.
PropertyResult lca_exhaustive(int max_nodes);

// Random shapes in [min_nodes, max_nodes], same oracle plus the dominance
// properties (result dominates both, no child of it does).
PropertyResult lca_random(int min_nodes, int max_nodes, int trees, std::uint64_t seed);

// Random tree of n nodes rendered in bracket form plus its pre-order tag list
// computed by plain recursion.
struct RandomTree {
  std::string text;
  std::vector<std::string> preorder_tags;
  std::vector<int> parent;
};
RandomTree random_tree(int nodes, std::uint64_t seed);

PropertyResult normalize_idempotence(int words, std::uint64_t seed);

PropertyResult np_noncontainment(const std::vector<std::string> &trees);

// Renames every variable consistently (and reorders basic triples) and
// compares canonical forms.
PropertyResult canonical_renaming(const std::vector<std::string> &queries, int renamings,
                                  std::uint64_t seed, const arsparql::PrefixMap &context);

// Blanks each part of every valid fixture triple and compares complete_triple
// with a scan over the raw rdfs:domain / rdfs:range statements.
PropertyResult completion_oracle(const std::string &ontology_file);

}  // namespace testsupport
