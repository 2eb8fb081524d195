#include "arsparql/mapper.hpp"

#include <algorithm>

#include "arsparql/error.hpp"

namespace arsparql {

TriplePart TriplePart::literal(std::string text) {
  TriplePart p;
  p.kind = Kind::kLiteral;
  p.value = std::move(text);
  return p;
}

TriplePart TriplePart::matched(const DictMatch &m) {
  TriplePart p;
  p.kind = Kind::kMatched;
  p.value = m.iri;
  p.term_kind = m.kind;
  p.tier = m.tier;
  return p;
}

TriplePart TriplePart::term(std::string iri, TermKind kind) {
  TriplePart p;
  p.kind = Kind::kMatched;
  p.value = std::move(iri);
  p.term_kind = kind;
  return p;
}

std::string TriplePart::str() const {
  switch (kind) {
    case Kind::kMatched: return value;
    case Kind::kLiteral: return "\"" + value + "\"";
    case Kind::kMissing: return "?";
  }
  return "?";
}

int CandidateRdfTriple::missing_count() const {
  return int(subject.is_missing()) + int(predicate.is_missing()) + int(object.is_missing());
}

std::string CandidateRdfTriple::str() const {
  return "<" + subject.str() + ", " + predicate.str() + ", " + object.str() + ">";
}

namespace {

std::vector<DictMatch> filter_kinds(std::vector<DictMatch> in, bool properties) {
  std::erase_if(in, [&](const DictMatch &m) { return is_property_kind(m.kind) != properties; });
  return in;
}

// Longest sub-spans first, leftmost first within a length; stops at the first
// length that yields any match.
std::vector<DictMatch> match_subspans(const std::vector<std::string> &words, std::size_t max_len,
                                      const OntologicalDictionary &dict, bool properties) {
  for (std::size_t len = std::min(max_len, words.size()); len >= 1; --len) {
    for (std::size_t i = 0; i + len <= words.size(); ++i) {
      std::vector<std::string> sub(words.begin() + i, words.begin() + i + len);
      auto hits = filter_kinds(dict.lookup(sub), properties);
      if (!hits.empty()) return hits;
    }
  }
  return {};
}

Score score_of(const CandidateRdfTriple &c) {
  Score s;
  for (const TriplePart *p : {&c.subject, &c.predicate, &c.object}) {
    if (p->is_matched() && !p->completed) s.worst_tier = std::max(s.worst_tier, int(p->tier));
    if (p->completed) s.completion_penalty = 1;
  }
  return s;
}

}  // namespace

std::vector<DictMatch> match_noun_phrase(const NounPhrase &np, const OntologicalDictionary &dict) {
  if (np.tokens.empty()) return {};
  auto hits = filter_kinds(dict.lookup(np.tokens), false);
  if (!hits.empty()) return hits;
  if (!np.head_tokens.empty() && np.head_tokens != np.tokens) {
    hits = filter_kinds(dict.lookup(np.head_tokens), false);
    if (!hits.empty()) return hits;
  }
  if (np.tokens.size() < 2) return {};
  return match_subspans(np.tokens, np.tokens.size() - 1, dict, false);
}

std::vector<DictMatch> match_predicate(const std::vector<std::string> &tokens,
                                       const OntologicalDictionary &dict) {
  const TextProcessor &text = dict.text();
  std::vector<std::string> content = text.stopwords.strip(text.normalize_all(tokens));
  if (content.empty()) return {};
  auto hits = filter_kinds(dict.lookup(content), true);
  if (!hits.empty() || content.size() < 2) return hits;
  return match_subspans(content, content.size() - 1, dict, true);
}

std::vector<CandidateRdfTriple> match_intermediate(const IntermediateTriple &it,
                                                   const OntologicalDictionary &dict) {
  auto as_parts = [](const std::vector<DictMatch> &ms) {
    std::vector<TriplePart> out;
    for (const auto &m : ms) out.push_back(TriplePart::matched(m));
    if (out.empty()) out.push_back(TriplePart::missing());
    return out;
  };
  const auto subjects = as_parts(match_noun_phrase(it.subject, dict));
  const auto predicates = as_parts(match_predicate(it.predicate_tokens, dict));
  const auto object_matches = match_noun_phrase(it.object, dict);
  const auto objects = as_parts(object_matches);

  std::vector<CandidateRdfTriple> out;
  for (const auto &p : predicates) {
    // A datatype predicate always takes the object text as a literal; any
    // entity matches stay as alternatives and are rejected by validation.
    std::vector<TriplePart> objs = objects;
    if (p.is_matched() && p.term_kind == TermKind::kDatatypeProperty) {
      if (object_matches.empty()) objs.clear();
      objs.push_back(TriplePart::literal(it.object.text()));
    }
    for (const auto &s : subjects) {
      for (const auto &o : objs) {
        CandidateRdfTriple c;
        c.subject = s;
        c.predicate = p;
        c.object = o;
        c.subject_np = it.subject.node;
        c.object_np = it.object.node;
        c.predicate_leaves = it.predicate_leaves;
        c.conjunction_origin = it.conjunction_origin;
        c.conjunctive_head = it.conjunctive_head;
        c.score = score_of(c);
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

namespace {

// Known term agrees with a schema class when one of its classes is a
// subclass of it; the universal marker agrees with everything.
bool agrees(const OntologyStore &store, const TriplePart &part, const std::string &cls) {
  if (cls == vocab::kTop) return !part.is_literal();
  if (cls == vocab::kLiteral) return part.is_literal();
  if (!part.is_matched() || is_property_kind(part.term_kind)) return false;
  for (const auto &c : store.classes_of(part.value))
    if (store.is_subclass_of(c, cls)) return true;
  return false;
}

}  // namespace

std::vector<CandidateRdfTriple> complete_triple(const CandidateRdfTriple &c,
                                                const OntologyStore &store) {
  const int missing = c.missing_count();
  if (missing >= 2)
    throw Error(ErrorCode::kTooManyMissing,
                "cannot complete " + c.str() + ": " + std::to_string(missing) + " parts missing");
  if (missing == 0) return {c};

  std::vector<CandidateRdfTriple> out;
  auto push = [&](CandidateRdfTriple t) {
    for (const auto &o : out)
      if (o.subject == t.subject && o.predicate == t.predicate && o.object == t.object) return;
    t.score = score_of(t);
    out.push_back(std::move(t));
  };

  for (const auto &st : schema_statements(store)) {
    const Term *prop = store.term(st.property);
    if (!prop) continue;
    if (c.predicate.is_matched() && c.predicate.value != st.property) continue;
    if (!c.subject.is_missing() && !agrees(store, c.subject, st.domain)) continue;
    if (!c.object.is_missing() && !agrees(store, c.object, st.range)) continue;

    CandidateRdfTriple t = c;
    if (c.predicate.is_missing()) {
      t.predicate = TriplePart::term(st.property, prop->kind);
      t.predicate.completed = true;
    } else if (c.subject.is_missing()) {
      if (st.domain == vocab::kTop) continue;
      t.subject = TriplePart::term(st.domain, TermKind::kClass);
      t.subject.completed = true;
    } else {
      if (st.range == vocab::kTop || st.range == vocab::kLiteral) continue;
      t.object = TriplePart::term(st.range, TermKind::kClass);
      t.object.completed = true;
    }
    push(std::move(t));
  }
  return out;
}

bool validate_triple(const CandidateRdfTriple &c, const OntologyStore &store) {
  if (c.missing_count() > 0 || !c.predicate.is_matched() || c.subject.is_literal()) return false;
  const std::string &p = c.predicate.value;
  if (!store.is_property(p)) return false;
  const bool datatype = store.is_datatype_property(p);
  if (c.object.is_literal() != datatype) return false;

  auto fits = [&](const TriplePart &part, const std::set<std::string> &allowed) {
    if (is_property_kind(part.term_kind)) return false;
    if (allowed.empty()) return true;
    for (const auto &cls : allowed)
      if (agrees(store, part, cls)) return true;
    return false;
  };
  if (!fits(c.subject, store.domain_of(p))) return false;
  if (datatype) return true;
  return fits(c.object, store.range_of(p));
}

std::vector<CandidateRdfTriple> best_valid(std::vector<CandidateRdfTriple> candidates,
                                           const OntologyStore &store) {
  std::vector<CandidateRdfTriple> valid;
  for (auto &c : candidates) {
    c.valid = validate_triple(c, store);
    if (c.valid) valid.push_back(c);
  }
  if (valid.empty()) return valid;
  Score best = valid.front().score;
  for (const auto &c : valid) best = std::min(best, c.score);
  std::erase_if(valid, [&](const CandidateRdfTriple &c) { return c.score != best; });
  return valid;
}

Chooser batch_chooser() {
  return [](const ChoiceContext &, const std::vector<CandidateRdfTriple> &cands)
             -> std::optional<std::size_t> {
    if (cands.empty()) return std::nullopt;
    std::size_t best = 0;
    bool tie = false;
    for (std::size_t i = 1; i < cands.size(); ++i) {
      if (cands[i].score < cands[best].score) {
        best = i;
        tie = false;
      } else if (cands[i].score == cands[best].score) {
        tie = true;
      }
    }
    if (tie) return std::nullopt;
    return best;
  };
}

CandidateRdfTriple resolve(const std::vector<CandidateRdfTriple> &candidates,
                           const Chooser &chooser, const ChoiceContext &ctx) {
  if (candidates.empty())
    throw Error(ErrorCode::kNoValidTriple, "no valid ontology statement for " + ctx.intermediate);
  if (candidates.size() == 1) return candidates.front();
  std::optional<std::size_t> pick = chooser ? chooser(ctx, candidates) : std::nullopt;
  if (!pick || *pick >= candidates.size()) {
    std::string readings;
    for (const auto &c : candidates) readings += (readings.empty() ? "" : " | ") + c.str();
    throw Error(ErrorCode::kNoValidTriple,
                "ambiguous " + ctx.intermediate + " left unresolved: " + readings);
  }
  return candidates[*pick];
}

}  // namespace arsparql
