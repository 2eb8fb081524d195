#pragma once

// End-to-end translation: parse tree -> NPs -> Intermediate Triples -> RDF
// triples -> target/modifiers -> SPARQL, recorded stage by stage in a trace.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "arsparql/artext.hpp"
#include "arsparql/error.hpp"
#include "arsparql/mapper.hpp"
#include "arsparql/npx.hpp"
#include "arsparql/ontostore.hpp"
#include "arsparql/sparqlgen.hpp"

namespace arsparql {

enum class ChooserMode { kBatch, kInteractive };

struct PipelineConfig {
  std::string ontology_path;
  std::string synonyms_path;
  std::string stopwords_path;
  std::string stems_path;
  std::string question_words_path;
  std::string order_words_path;
  std::string prefixes_path;  // extra "@prefix p: <iri> ." lines for output
  std::set<std::string> languages{"ar", ""};
  ChooserMode chooser = ChooserMode::kBatch;
};

// Error taxonomy used for failed translations.
inline constexpr std::string_view kStageParsing = "parsing";
inline constexpr std::string_view kStageEntity = "entity identification";
inline constexpr std::string_view kStageSemantic = "semantic analysis";
std::string_view failure_stage(ErrorCode code);

struct TripleTrace {
  IntermediateTriple intermediate;
  std::vector<CandidateRdfTriple> matched;    // straight from the dictionary
  std::vector<CandidateRdfTriple> completed;  // after completion
  std::vector<CandidateRdfTriple> valid;      // best-scoring valid readings
  std::optional<CandidateRdfTriple> chosen;
  bool chooser_invoked = false;
};

struct TranslationTrace {
  std::string question;
  std::string tree;
  std::vector<NounPhrase> nps;
  std::vector<TripleTrace> triples;
  std::optional<QueryTarget> target;
  std::vector<ModifierDescriptor> modifiers;
  std::vector<std::string> unsupported;
  std::vector<std::string> warnings;

  bool ok = false;
  std::string sparql;
  std::string failure_stage;
  std::string failure_code;
  std::string failure_reason;

  std::string to_json(int indent = 2) const;
  std::string to_text() const;
};

class Pipeline {
 public:
  Pipeline(OntologyStore store, SynonymLexicon synonyms, TextProcessor text,
           WordList question_words, WordList order_words,
           OntologicalDictionary::Options options = {});

  // Reads every configured file; missing optional paths fall back to the
  // built-in tables. Throws kConfigError / kIoError / kSyntaxError.
  static Pipeline load(const PipelineConfig &config);

  TranslationTrace translate(std::string_view question, const ParseTree &tree,
                             const Chooser &chooser) const;
  // Parses `tree_text` first; parse errors become a "parsing" failure.
  TranslationTrace translate(std::string_view question, std::string_view tree_text,
                             const Chooser &chooser) const;

  const OntologyStore &store() const { return store_; }
  const OntologicalDictionary &dictionary() const { return dict_; }
  const PrefixMap &output_prefixes() const { return prefixes_; }
  void add_prefixes(const PrefixMap &extra);

  // "<:City (مدينة), :isCityOf (...), :Texas (تكساس)>" for prompts.
  std::string describe(const CandidateRdfTriple &c) const;

 private:
  OntologyStore store_;
  SynonymLexicon synonyms_;
  OntologicalDictionary dict_;
  WordList question_words_;
  WordList order_words_;
  PrefixMap prefixes_;
};

std::string read_file(const std::string &path);

}  // namespace arsparql
