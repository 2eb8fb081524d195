#include "arsparql/pipeline.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace arsparql {

using nlohmann::ordered_json;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view failure_stage(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput:
    case ErrorCode::kUnbalancedBrackets:
    case ErrorCode::kLeafWithoutToken:
    case ErrorCode::kMalformedTree:
    case ErrorCode::kNodeNotInTree:
    case ErrorCode::kDominanceViolation:
    case ErrorCode::kNoNounPhrases:
    case ErrorCode::kNoHeadFound:
      return kStageParsing;
    case ErrorCode::kTooManyMissing:
    case ErrorCode::kNoValidTriple:
    case ErrorCode::kTargetUnmatched:
      return kStageEntity;
    default:
      return kStageSemantic;
  }
}

Pipeline::Pipeline(OntologyStore store, SynonymLexicon synonyms, TextProcessor text,
                   WordList question_words, WordList order_words,
                   OntologicalDictionary::Options options)
    : store_(std::move(store)),
      synonyms_(std::move(synonyms)),
      dict_(OntologicalDictionary::build(store_, synonyms_, text, options)),
      question_words_(std::move(question_words)),
      order_words_(std::move(order_words)),
      prefixes_(store_.prefixes()) {}

void Pipeline::add_prefixes(const PrefixMap &extra) {
  for (const auto &[k, v] : extra) prefixes_[k] = v;
}

Pipeline Pipeline::load(const PipelineConfig &config) {
  if (config.ontology_path.empty()) throw Error(ErrorCode::kConfigError, "no ontology configured");
  OntologyStore store = OntologyStore::load_file(config.ontology_path).infer_closure();

  SynonymLexicon syn;
  if (!config.synonyms_path.empty()) syn = SynonymLexicon::parse(read_file(config.synonyms_path));

  TextProcessor text;
  if (!config.stopwords_path.empty())
    text.stopwords = StopWordList::parse(read_file(config.stopwords_path));
  if (!config.stems_path.empty()) text.stems = StemRules::parse(read_file(config.stems_path));

  WordList qwords = config.question_words_path.empty()
                        ? WordList::question_default()
                        : WordList::parse(read_file(config.question_words_path));
  WordList owords = config.order_words_path.empty()
                        ? WordList::order_default()
                        : WordList::parse(read_file(config.order_words_path));

  OntologicalDictionary::Options options;
  options.languages = config.languages;
  Pipeline p(std::move(store), std::move(syn), std::move(text), std::move(qwords),
             std::move(owords), options);
  if (!config.prefixes_path.empty())
    p.add_prefixes(OntologyStore::load_ntriples(read_file(config.prefixes_path)).prefixes());
  return p;
}

std::string Pipeline::describe(const CandidateRdfTriple &c) const {
  auto part = [&](const TriplePart &p) {
    if (!p.is_matched()) return p.str();
    std::string label = store_.display_label(p.value);
    return label == p.value ? p.value : p.value + " (" + label + ")";
  };
  return "<" + part(c.subject) + ", " + part(c.predicate) + ", " + part(c.object) + ">";
}

namespace {

std::string intermediate_text(const IntermediateTriple &it) {
  return "<" + it.subject.text() + " | " + join(it.predicate_tokens) + " | " + it.object.text() +
         ">";
}

// Leaf tokens are clitic-segmented, so they are checked as substrings of the
// normalized question rather than as whole words.
std::vector<std::string> leaf_mismatches(std::string_view question, const ParseTree &tree) {
  const std::string q = normalize(question);
  std::vector<std::string> out;
  for (const auto &tok : tree.leaf_tokens()) {
    std::string n = normalize(tok);
    if (!n.empty() && q.find(n) == std::string::npos) out.push_back(tok);
  }
  return out;
}

}  // namespace

TranslationTrace Pipeline::translate(std::string_view question, std::string_view tree_text,
                                     const Chooser &chooser) const {
  try {
    ParseTree tree = ParseTree::parse(tree_text);
    return translate(question, tree, chooser);
  } catch (const Error &e) {
    TranslationTrace t;
    t.question = std::string(question);
    t.tree = std::string(tree_text);
    t.failure_stage = std::string(kStageParsing);
    t.failure_code = std::string(error_code_name(e.code()));
    t.failure_reason = e.what();
    return t;
  }
}

TranslationTrace Pipeline::translate(std::string_view question, const ParseTree &tree,
                                     const Chooser &chooser) const {
  TranslationTrace trace;
  trace.question = std::string(question);
  trace.tree = tree.serialize();
  for (const auto &tok : leaf_mismatches(question, tree))
    trace.warnings.push_back("tree token '" + tok + "' does not occur in the question");

  ModifierScan mods = extract_modifiers(tree);
  trace.modifiers = mods.descriptors;
  trace.unsupported = mods.unsupported;

  auto unsupported_error = [&] {
    std::string words;
    for (const auto &w : mods.unsupported) words += (words.empty() ? "" : ", ") + w;
    return Error(ErrorCode::kUnsupportedModifier,
                 "comparative/superlative modifier not supported: " + words);
  };

  try {
    for (NounPhrase np : extract_nps(tree)) trace.nps.push_back(split_head_modifiers(std::move(np)));

    std::vector<CandidateRdfTriple> chosen;
    const auto intermediate = build_intermediate_triples(tree, trace.nps);
    for (std::size_t i = 0; i < intermediate.size(); ++i) {
      TripleTrace tt;
      tt.intermediate = intermediate[i];
      tt.matched = match_intermediate(intermediate[i], dict_);
      std::optional<Error> too_many;
      for (const auto &c : tt.matched) {
        try {
          for (auto &done : complete_triple(c, store_)) tt.completed.push_back(std::move(done));
        } catch (const Error &e) {
          if (e.code() != ErrorCode::kTooManyMissing) throw;
          too_many = e;
        }
      }
      if (tt.completed.empty() && too_many) {
        trace.triples.push_back(tt);
        throw Error(ErrorCode::kTooManyMissing,
                    std::string("could not map ") + intermediate_text(intermediate[i]) + ": " +
                        too_many->what());
      }
      tt.valid = best_valid(tt.completed, store_);
      ChoiceContext ctx{trace.question, i, intermediate_text(intermediate[i])};
      tt.chooser_invoked = tt.valid.size() > 1;
      trace.triples.push_back(tt);
      CandidateRdfTriple pick = resolve(tt.valid, chooser, ctx);
      trace.triples.back().chosen = pick;
      chosen.push_back(std::move(pick));
    }

    QueryTarget target = extract_target(tree, trace.nps, question_words_, order_words_);
    for (const auto &c : chosen) {
      if (!target.term.empty()) break;
      if (c.subject_np == target.np.node && c.subject.is_matched()) target.term = c.subject.value;
      if (c.object_np == target.np.node && c.object.is_matched()) target.term = c.object.value;
    }
    if (target.term.empty()) {
      auto hits = match_noun_phrase(target.np, dict_);
      if (!hits.empty()) target.term = hits.front().iri;
    }
    if (const Term *t = store_.term(target.term)) target.term_kind = t->kind;
    trace.target = target;

    if (!mods.unsupported.empty()) throw unsupported_error();
    SparqlQuery q = build_query(chosen, target, mods.descriptors, store_);
    trace.sparql = serialize(q, prefixes_);
    trace.ok = true;
  } catch (const Error &e) {
    Error err = e;
    if (!mods.unsupported.empty() && e.code() != ErrorCode::kUnsupportedModifier) {
      err = unsupported_error();
      trace.warnings.push_back(std::string("earlier failure: ") + e.what());
    }
    trace.ok = false;
    trace.failure_stage = std::string(failure_stage(err.code()));
    trace.failure_code = std::string(error_code_name(err.code()));
    trace.failure_reason = err.what();
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Trace rendering

namespace {

ordered_json np_json(const NounPhrase &np) {
  return {{"node", np.node},
          {"text", np.text()},
          {"span", {np.span.begin, np.span.end}},
          {"premodifiers", np.premodifiers},
          {"head", np.head()},
          {"postmodifiers", np.postmodifiers}};
}

ordered_json part_json(const TriplePart &p) {
  ordered_json j;
  switch (p.kind) {
    case TriplePart::Kind::kMatched:
      j = {{"kind", "MATCHED"},
           {"iri", p.value},
           {"term_kind", term_kind_name(p.term_kind)},
           {"tier", p.completed ? "COMPLETED" : match_tier_name(p.tier)}};
      break;
    case TriplePart::Kind::kLiteral: j = {{"kind", "LITERAL"}, {"text", p.value}}; break;
    case TriplePart::Kind::kMissing: j = {{"kind", "MISSING"}}; break;
  }
  return j;
}

ordered_json candidate_json(const CandidateRdfTriple &c) {
  return {{"triple", c.str()},
          {"subject", part_json(c.subject)},
          {"predicate", part_json(c.predicate)},
          {"object", part_json(c.object)},
          {"score", {c.score.worst_tier, c.score.completion_penalty}},
          {"valid", c.valid}};
}

ordered_json candidates_json(const std::vector<CandidateRdfTriple> &cs) {
  ordered_json arr = ordered_json::array();
  for (const auto &c : cs) arr.push_back(candidate_json(c));
  return arr;
}

}  // namespace

std::string TranslationTrace::to_json(int indent) const {
  ordered_json j;
  j["question"] = question;
  j["tree"] = tree;
  j["noun_phrases"] = ordered_json::array();
  for (const auto &np : nps) j["noun_phrases"].push_back(np_json(np));
  j["triples"] = ordered_json::array();
  for (const auto &t : triples) {
    ordered_json tj;
    tj["intermediate"] = {{"subject", t.intermediate.subject.text()},
                          {"predicate", join(t.intermediate.predicate_tokens)},
                          {"object", t.intermediate.object.text()}};
    if (t.intermediate.conjunction_origin)
      tj["intermediate"]["conjunction"] = conjunction_name(*t.intermediate.conjunction_origin);
    tj["matched"] = candidates_json(t.matched);
    tj["completed"] = candidates_json(t.completed);
    tj["valid"] = candidates_json(t.valid);
    tj["chooser_invoked"] = t.chooser_invoked;
    tj["chosen"] = t.chosen ? candidate_json(*t.chosen) : ordered_json(nullptr);
    j["triples"].push_back(tj);
  }
  if (target) {
    j["target"] = {{"text", target->np.text()},
                   {"trigger", target->trigger},
                   {"term", target->term.empty() ? ordered_json(nullptr) : ordered_json(target->term)},
                   {"variable", target->variable_name}};
  } else {
    j["target"] = nullptr;
  }
  j["modifiers"] = ordered_json::array();
  for (const auto &m : modifiers)
    j["modifiers"].push_back(
        {{"kind", modifier_kind_name(m.kind)}, {"token", m.trigger_token}, {"position", m.position}});
  j["unsupported_modifiers"] = unsupported;
  j["warnings"] = warnings;
  j["ok"] = ok;
  j["sparql"] = ok ? ordered_json(sparql) : ordered_json(nullptr);
  if (ok) {
    j["failure"] = nullptr;
  } else {
    j["failure"] = {{"stage", failure_stage}, {"code", failure_code}, {"reason", failure_reason}};
  }
  return j.dump(indent);
}

std::string TranslationTrace::to_text() const {
  std::ostringstream out;
  out << "question: " << question << "\n";
  out << "noun phrases:\n";
  for (const auto &np : nps) {
    out << "  [" << np.node << "] " << np.text() << "  head=" << np.head();
    if (!np.premodifiers.empty()) out << " pre=" << join(np.premodifiers);
    if (!np.postmodifiers.empty()) out << " post=" << join(np.postmodifiers);
    out << "\n";
  }
  out << "triples:\n";
  for (const auto &t : triples) {
    out << "  " << intermediate_text(t.intermediate);
    if (t.intermediate.conjunction_origin)
      out << " (" << conjunction_name(*t.intermediate.conjunction_origin) << ")";
    out << "\n";
    for (const auto &c : t.matched) out << "    matched   " << c.str() << "\n";
    for (const auto &c : t.completed)
      if (c.score.completion_penalty) out << "    completed " << c.str() << "\n";
    for (const auto &c : t.valid) out << "    valid     " << c.str() << "\n";
    if (t.chosen) out << "    chosen    " << t.chosen->str() << "\n";
  }
  if (target) {
    out << "target: " << target->np.text() << " -> "
        << (target->term.empty() ? "(unmatched)" : target->term) << "\n";
  }
  if (!modifiers.empty()) {
    out << "modifiers:";
    for (const auto &m : modifiers)
      out << " " << modifier_kind_name(m.kind) << "(" << m.trigger_token << "@" << m.position << ")";
    out << "\n";
  }
  for (const auto &w : warnings) out << "warning: " << w << "\n";
  if (ok) {
    out << "result: ok\n";
  } else {
    out << "result: failed at " << failure_stage << " [" << failure_code << "] " << failure_reason
        << "\n";
  }
  return out.str();
}

}  // namespace arsparql
