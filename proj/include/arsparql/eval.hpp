#pragma once

// Gold-query evaluation: dataset loading, batch translation, canonical
// comparison, precision / recall.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "arsparql/pipeline.hpp"

namespace arsparql {

struct DatasetCase {
  std::string id;
  std::string question;
  std::string tree;
  std::optional<std::string> gold_sparql;  // nullopt: expected untranslatable
  std::string category;
};

// JSON array of {id, question, tree, gold_sparql, category?}. Throws
// kSchemaError with the case index as position.
std::vector<DatasetCase> load_dataset(std::string_view json_text);

struct Metrics {
  std::optional<double> precision;  // percent; nullopt when nothing was generated
  double recall = 0;                // percent
  // Rounded half-up from the exact ratios: "80.56%", or "null".
  std::string precision_text;
  std::string recall_text;
};

// Exact ratios as percentages. Throws kCountOrderViolation unless
// correct <= generated <= total.
Metrics metrics(std::size_t correct, std::size_t generated, std::size_t total);

// num/den as a two-decimal percentage, rounded half-up on the exact ratio.
std::string format_percent(std::size_t num, std::size_t den);

struct CaseResult {
  std::string id;
  std::string category;
  bool generated = false;
  bool correct = false;
  bool expected_untranslatable = false;
  std::string sparql;
  std::string stage;   // failure stage, or "mismatch" for a wrong query
  std::string reason;
};

struct EvalReport {
  std::size_t total = 0;
  std::size_t generated = 0;
  std::size_t correct = 0;
  Metrics scores;
  // Cases with a gold query, and recall over them.
  std::size_t supported_total = 0;
  double supported_recall = 0;
  // Cases without a gold query that the system left untranslated.
  std::size_t expected_untranslatable = 0;
  std::size_t correctly_untranslated = 0;
  std::vector<CaseResult> cases;  // sorted by id
  std::vector<CaseResult> failures;

  std::string to_json(int indent = 2) const;
  std::string to_text() const;
};

// Runs every case through `pipeline` with the batch chooser.
EvalReport run_eval(const std::vector<DatasetCase> &cases, const Pipeline &pipeline);

}  // namespace arsparql
