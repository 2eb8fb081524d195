#include "arsparql/ontostore.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "arsparql/error.hpp"

namespace arsparql {

std::string_view term_kind_name(TermKind k) {
  switch (k) {
    case TermKind::kClass: return "CLASS";
    case TermKind::kObjectProperty: return "OBJECT_PROPERTY";
    case TermKind::kDatatypeProperty: return "DATATYPE_PROPERTY";
    case TermKind::kInstance: return "INSTANCE";
  }
  return "?";
}

std::string_view match_tier_name(MatchTier t) {
  switch (t) {
    case MatchTier::kExact: return "EXACT";
    case MatchTier::kSynonym: return "SYNONYM";
    case MatchTier::kStem: return "STEM";
    case MatchTier::kSkeleton: return "SKELETON";
  }
  return "?";
}

PrefixMap builtin_prefixes() {
  return {
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"owl", "http://www.w3.org/2002/07/owl#"},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
  };
}

namespace {

const std::set<std::string> kEmptySet;

bool is_builtin_vocab(std::string_view iri) {
  return iri.starts_with("rdf:") || iri.starts_with("rdfs:") || iri.starts_with("owl:") ||
         iri.starts_with("xsd:");
}

bool is_literal_datatype(std::string_view iri) {
  return iri.starts_with("xsd:") || iri == "rdfs:Literal" || iri == "rdf:langString";
}

// ---------------------------------------------------------------------------
// N-Triples line lexer

struct Token {
  enum Kind { kIri, kCurie, kLiteral, kBlank, kDot, kA, kDirective } kind;
  std::string text;
  std::string lang = {};
  std::string datatype = {};  // raw (IRI or CURIE) for literals
  bool datatype_is_curie = false;
};

class LineLexer {
 public:
  LineLexer(std::string_view line, long line_no) : s_(line), line_no_(line_no) {}

  [[noreturn]] void fail(const std::string &msg) const {
    throw Error(ErrorCode::kSyntaxError, "line " + std::to_string(line_no_) + ": " + msg,
                line_no_);
  }

  bool next(Token &tok) {
    skip_ws();
    if (i_ >= s_.size() || s_[i_] == '#') return false;
    char c = s_[i_];
    if (c == '<') {
      auto end = s_.find('>', i_);
      if (end == std::string_view::npos) fail("unterminated IRI");
      tok = {Token::kIri, std::string(s_.substr(i_ + 1, end - i_ - 1))};
      i_ = end + 1;
      return true;
    }
    if (c == '"') {
      tok = {Token::kLiteral, read_string()};
      if (i_ < s_.size() && s_[i_] == '@') {
        std::size_t start = ++i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-'))
          ++i_;
        tok.lang = std::string(s_.substr(start, i_ - start));
        if (tok.lang.empty()) fail("empty language tag");
      } else if (s_.substr(i_, 2) == "^^") {
        i_ += 2;
        Token dt;
        if (!next(dt) || (dt.kind != Token::kIri && dt.kind != Token::kCurie))
          fail("datatype IRI expected after ^^");
        tok.datatype = dt.text;
        tok.datatype_is_curie = dt.kind == Token::kCurie;
      }
      return true;
    }
    if (c == '.') {
      ++i_;
      tok = {Token::kDot, "."};
      return true;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::string word(s_.substr(start, i_ - start));
    // "…:Disease." -> CURIE followed by the terminator.
    if (word.size() > 1 && word.back() == '.') {
      word.pop_back();
      --i_;
    }
    if (word == "a") {
      tok = {Token::kA, word};
    } else if (word.starts_with("_:")) {
      tok = {Token::kBlank, word};
    } else if (word.starts_with("@")) {
      tok = {Token::kDirective, word};
    } else if (word.find(':') != std::string::npos) {
      tok = {Token::kCurie, word};
    } else {
      fail("unexpected token '" + word + "'");
    }
    return true;
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string read_string() {
    std::string out;
    ++i_;  // opening quote
    while (true) {
      if (i_ >= s_.size()) fail("unterminated literal");
      char c = s_[i_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (i_ >= s_.size()) fail("dangling escape");
      char e = s_[i_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'u':
        case 'U': {
          std::size_t n = e == 'u' ? 4 : 8;
          if (i_ + n > s_.size()) fail("short unicode escape");
          char32_t cp = static_cast<char32_t>(std::stoul(std::string(s_.substr(i_, n)), nullptr, 16));
          i_ += n;
          out += utf8::encode(std::u32string(1, cp));
          break;
        }
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    return out;
  }

  std::string_view s_;
  long line_no_;
  std::size_t i_ = 0;
};

}  // namespace

std::string OntologyStore::compact(std::string_view full) const {
  const std::string *best_prefix = nullptr;
  std::size_t best_len = 0;
  for (const auto &[prefix, ns] : prefixes_) {
    if (full.starts_with(ns) && ns.size() > best_len) {
      best_prefix = &prefix;
      best_len = ns.size();
    }
  }
  if (!best_prefix) return "<" + std::string(full) + ">";
  return *best_prefix + ":" + std::string(full.substr(best_len));
}

OntologyStore OntologyStore::load_ntriples(std::string_view text) {
  OntologyStore store;
  auto resolve = [&](const Token &t, LineLexer &lx) -> std::string {
    switch (t.kind) {
      case Token::kIri: return store.compact(t.text);
      case Token::kCurie: {
        auto colon = t.text.find(':');
        std::string prefix = t.text.substr(0, colon);
        // A bare ":" works without a declaration; it gets a local namespace.
        if (prefix.empty() && !store.prefixes_.count(prefix))
          store.prefixes_[prefix] = "urn:arsparql:local#";
        if (!store.prefixes_.count(prefix)) lx.fail("unknown prefix '" + prefix + ":'");
        return t.text;
      }
      case Token::kBlank: return t.text;
      case Token::kA: return std::string(vocab::kType);
      default: lx.fail("IRI expected");
    }
  };

  long line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    LineLexer lx(line, line_no);
    std::vector<Token> toks;
    Token t;
    while (lx.next(t)) toks.push_back(t);
    if (toks.empty()) continue;

    if (toks[0].kind == Token::kDirective) {
      if (toks[0].text != "@prefix" || toks.size() != 4 || toks[1].kind != Token::kCurie ||
          toks[1].text.back() != ':' || toks[2].kind != Token::kIri || toks[3].kind != Token::kDot)
        lx.fail("malformed @prefix directive");
      store.prefixes_[toks[1].text.substr(0, toks[1].text.size() - 1)] = toks[2].text;
      continue;
    }
    if (toks.back().kind != Token::kDot) lx.fail("statement must end with '.'");
    if (toks.size() != 4) lx.fail("expected subject, predicate, object and '.'");
    if (toks[0].kind == Token::kLiteral) lx.fail("literal in subject position");
    if (toks[1].kind == Token::kLiteral || toks[1].kind == Token::kBlank)
      lx.fail("predicate must be an IRI");

    Statement st;
    st.subject = resolve(toks[0], lx);
    st.predicate = resolve(toks[1], lx);
    if (toks[2].kind == Token::kLiteral) {
      st.object.literal = true;
      st.object.value = toks[2].text;
      st.object.lang = toks[2].lang;
      if (!toks[2].datatype.empty()) {
        Token dt{toks[2].datatype_is_curie ? Token::kCurie : Token::kIri, toks[2].datatype};
        st.object.datatype = resolve(dt, lx);
      }
    } else {
      st.object = RdfNode::iri(resolve(toks[2], lx));
    }
    store.statements_.insert(std::move(st));
  }
  store.index();
  return store;
}

OntologyStore OntologyStore::load_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open ontology file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_ntriples(ss.str());
}

void OntologyStore::index() {
  terms_.clear();
  domain_.clear();
  range_.clear();
  superclasses_.clear();
  types_.clear();
  instances_.clear();
  // Warnings from a previous index() pass are replaced.
  warnings_.clear();

  std::map<std::string, TermKind> kinds;
  auto set_kind = [&](const std::string &iri, TermKind k) {
    if (is_builtin_vocab(iri)) return;
    auto [it, inserted] = kinds.emplace(iri, k);
    // Datatype evidence wins over the object-property default.
    if (!inserted && k == TermKind::kDatatypeProperty && it->second == TermKind::kObjectProperty)
      it->second = k;
  };

  for (const auto &st : statements_) {
    const std::string &o = st.object.value;
    if (st.predicate == vocab::kType && !st.object.literal) {
      if (o == "owl:Class" || o == "rdfs:Class") {
        set_kind(st.subject, TermKind::kClass);
      } else if (o == "owl:ObjectProperty" || o == "owl:TransitiveProperty" ||
                 o == "owl:SymmetricProperty" || o == "owl:InverseFunctionalProperty") {
        set_kind(st.subject, TermKind::kObjectProperty);
      } else if (o == "owl:DatatypeProperty") {
        set_kind(st.subject, TermKind::kDatatypeProperty);
      }
    } else if (st.predicate == vocab::kSubClassOf && !st.object.literal) {
      set_kind(st.subject, TermKind::kClass);
      set_kind(o, TermKind::kClass);
    } else if (st.predicate == vocab::kDomain) {
      set_kind(st.subject, TermKind::kObjectProperty);
      domain_[st.subject].insert(o);
    } else if (st.predicate == vocab::kRange) {
      set_kind(st.subject, is_literal_datatype(o) ? TermKind::kDatatypeProperty
                                                  : TermKind::kObjectProperty);
      range_[st.subject].insert(o);
    }
  }
  // Anything typed with a known class is an instance.
  for (const auto &st : statements_) {
    if (st.predicate != vocab::kType || st.object.literal) continue;
    auto it = kinds.find(st.object.value);
    if (it != kinds.end() && it->second == TermKind::kClass) {
      if (!kinds.count(st.subject)) kinds.emplace(st.subject, TermKind::kInstance);
      types_[st.subject].insert(st.object.value);
    }
  }

  auto register_term = [&](const std::string &iri) -> Term & {
    auto [it, inserted] = terms_.try_emplace(iri);
    if (inserted) {
      it->second.iri = iri;
      auto k = kinds.find(iri);
      if (k != kinds.end()) {
        it->second.kind = k->second;
      } else {
        it->second.kind = TermKind::kInstance;
        warnings_.push_back("UnknownKind: " + iri + " has no type; treated as INSTANCE");
      }
    }
    return it->second;
  };
  for (const auto &st : statements_) {
    if (is_builtin_vocab(st.subject)) continue;
    Term &t = register_term(st.subject);
    if (st.predicate == vocab::kLabel && st.object.literal)
      t.labels.push_back({st.object.value, st.object.lang});
    // Objects of ontology properties are resources too, typed or not.
    if (!st.object.literal && !is_builtin_vocab(st.predicate) && !is_builtin_vocab(st.object.value))
      register_term(st.object.value);
  }
  for (const auto &[iri, k] : kinds) {
    if (!terms_.count(iri)) terms_.emplace(iri, Term{iri, k, {}});
  }

  // Subclass closure over declared edges (also covers unclosed input).
  std::map<std::string, std::set<std::string>> direct;
  for (const auto &st : statements_)
    if (st.predicate == vocab::kSubClassOf && !st.object.literal)
      direct[st.subject].insert(st.object.value);
  for (const auto &[cls, supers] : direct) {
    std::set<std::string> &all = superclasses_[cls];
    std::vector<std::string> work(supers.begin(), supers.end());
    while (!work.empty()) {
      std::string c = work.back();
      work.pop_back();
      if (!all.insert(c).second) continue;
      auto d = direct.find(c);
      if (d != direct.end()) work.insert(work.end(), d->second.begin(), d->second.end());
    }
  }
  for (auto &[inst, types] : types_) {
    std::set<std::string> extra;
    for (const auto &t : types) {
      auto s = superclasses_.find(t);
      if (s != superclasses_.end()) extra.insert(s->second.begin(), s->second.end());
    }
    types.insert(extra.begin(), extra.end());
    for (const auto &t : types) instances_[t].insert(inst);
  }
}

const Term *OntologyStore::term(std::string_view iri) const {
  auto it = terms_.find(std::string(iri));
  return it == terms_.end() ? nullptr : &it->second;
}

bool OntologyStore::is_class(std::string_view iri) const {
  const Term *t = term(iri);
  return t && t->kind == TermKind::kClass;
}
bool OntologyStore::is_instance(std::string_view iri) const {
  const Term *t = term(iri);
  return t && t->kind == TermKind::kInstance;
}
bool OntologyStore::is_property(std::string_view iri) const {
  const Term *t = term(iri);
  return t && is_property_kind(t->kind);
}
bool OntologyStore::is_datatype_property(std::string_view iri) const {
  const Term *t = term(iri);
  return t && t->kind == TermKind::kDatatypeProperty;
}

const std::set<std::string> &OntologyStore::domain_of(std::string_view p) const {
  auto it = domain_.find(p);
  return it == domain_.end() ? kEmptySet : it->second;
}
const std::set<std::string> &OntologyStore::range_of(std::string_view p) const {
  auto it = range_.find(p);
  return it == range_.end() ? kEmptySet : it->second;
}
const std::set<std::string> &OntologyStore::superclasses(std::string_view c) const {
  auto it = superclasses_.find(c);
  return it == superclasses_.end() ? kEmptySet : it->second;
}
const std::set<std::string> &OntologyStore::types_of(std::string_view i) const {
  auto it = types_.find(i);
  return it == types_.end() ? kEmptySet : it->second;
}
const std::set<std::string> &OntologyStore::instances_of(std::string_view c) const {
  auto it = instances_.find(c);
  return it == instances_.end() ? kEmptySet : it->second;
}

bool OntologyStore::is_subclass_of(std::string_view sub, std::string_view super) const {
  return sub == super || superclasses(sub).count(std::string(super)) > 0;
}

std::set<std::string> OntologyStore::classes_of(std::string_view iri) const {
  if (is_class(iri)) return {std::string(iri)};
  return types_of(iri);
}

std::string OntologyStore::display_label(std::string_view iri, std::string_view lang) const {
  const Term *t = term(iri);
  if (!t || t->labels.empty()) return std::string(iri);
  for (const auto &l : t->labels)
    if (l.lang == lang) return l.text;
  for (const auto &l : t->labels)
    if (l.lang.empty()) return l.text;
  return t->labels.front().text;
}

// ---------------------------------------------------------------------------
// Inference

OntologyStore OntologyStore::infer_closure() const {
  OntologyStore out = *this;
  std::set<Statement> &st = out.statements_;

  auto has = [&](std::string_view s, std::string_view p, std::string_view o) {
    return st.count(Statement{std::string(s), std::string(p), RdfNode::iri(std::string(o))}) > 0;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::string> symmetric, transitive;
    std::map<std::string, std::set<std::string>> sub_prop, sub_class, dom, rng;
    for (const auto &s : st) {
      if (s.object.literal) continue;
      if (s.predicate == vocab::kType && s.object.value == "owl:SymmetricProperty")
        symmetric.insert(s.subject);
      if (s.predicate == vocab::kType && s.object.value == "owl:TransitiveProperty")
        transitive.insert(s.subject);
      if (s.predicate == vocab::kSubPropertyOf) sub_prop[s.subject].insert(s.object.value);
      if (s.predicate == vocab::kSubClassOf) sub_class[s.subject].insert(s.object.value);
      if (s.predicate == vocab::kDomain) dom[s.subject].insert(s.object.value);
      if (s.predicate == vocab::kRange) rng[s.subject].insert(s.object.value);
    }
    auto is_user_property = [&](const std::string &p) {
      return !is_builtin_vocab(p) && out.is_property(p);
    };

    std::vector<Statement> fresh;
    auto add = [&](Statement s) {
      if (!st.count(s)) fresh.push_back(std::move(s));
    };
    auto add_iri = [&](const std::string &s, std::string_view p, const std::string &o) {
      add(Statement{s, std::string(p), RdfNode::iri(o)});
    };

    for (const auto &s : st) {
      // Transitive relations: subClassOf, subPropertyOf, owl:TransitiveProperty.
      if (!s.object.literal && (s.predicate == vocab::kSubClassOf ||
                                s.predicate == vocab::kSubPropertyOf ||
                                transitive.count(s.predicate))) {
        for (const auto &t : st) {
          if (t.predicate == s.predicate && !t.object.literal && t.subject == s.object.value)
            add_iri(s.subject, s.predicate, t.object.value);
        }
      }
      if (s.object.literal) {
        if (auto sp = sub_prop.find(s.predicate); sp != sub_prop.end())
          for (const auto &q : sp->second) add(Statement{s.subject, q, s.object});
        continue;
      }
      if (s.predicate == vocab::kType) {
        if (auto sc = sub_class.find(s.object.value); sc != sub_class.end())
          for (const auto &d : sc->second) add_iri(s.subject, vocab::kType, d);
        continue;
      }
      if (symmetric.count(s.predicate)) add_iri(s.object.value, s.predicate, s.subject);
      if (auto sp = sub_prop.find(s.predicate); sp != sub_prop.end())
        for (const auto &q : sp->second) add_iri(s.subject, q, s.object.value);
      // Sub-properties without their own domain/range inherit the parent's.
      if (s.predicate == vocab::kSubPropertyOf) {
        if (!dom.count(s.subject))
          if (auto d = dom.find(s.object.value); d != dom.end())
            for (const auto &c : d->second) add_iri(s.subject, vocab::kDomain, c);
        if (!rng.count(s.subject))
          if (auto r = rng.find(s.object.value); r != rng.end())
            for (const auto &c : r->second) add_iri(s.subject, vocab::kRange, c);
      }
      // Domain / range typing of instances.
      if (is_user_property(s.predicate)) {
        if (out.is_instance(s.subject))
          if (auto d = dom.find(s.predicate); d != dom.end())
            for (const auto &c : d->second) add_iri(s.subject, vocab::kType, c);
        if (out.is_instance(s.object.value))
          if (auto r = rng.find(s.predicate); r != rng.end())
            for (const auto &c : r->second)
              if (!is_literal_datatype(c)) add_iri(s.object.value, vocab::kType, c);
      }
    }
    if (!fresh.empty()) {
      changed = true;
      st.insert(fresh.begin(), fresh.end());
    }
  }
  (void)has;
  out.index();
  return out;
}

std::vector<SchemaStatement> schema_statements(const OntologyStore &store) {
  std::vector<SchemaStatement> out;
  for (const auto &[iri, term] : store.terms()) {
    if (!is_property_kind(term.kind)) continue;
    std::set<std::string> domains = store.domain_of(iri);
    if (domains.empty()) domains.insert(std::string(vocab::kTop));
    std::set<std::string> ranges;
    if (term.kind == TermKind::kDatatypeProperty) {
      ranges.insert(std::string(vocab::kLiteral));
    } else {
      ranges = store.range_of(iri);
      if (ranges.empty()) ranges.insert(std::string(vocab::kTop));
    }
    for (const auto &d : domains)
      for (const auto &r : ranges) out.push_back({d, iri, r});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Synonyms

void SynonymLexicon::add(std::string_view a, std::string_view b) {
  std::string na = normalize(a), nb = normalize(b);
  if (na.empty() || nb.empty() || na == nb) return;
  map_[na].insert(nb);
  map_[nb].insert(na);
}

const std::set<std::string> &SynonymLexicon::synonyms(std::string_view w) const {
  auto it = map_.find(w);
  return it == map_.end() ? kEmptySet : it->second;
}

SynonymLexicon SynonymLexicon::parse(std::string_view text) {
  SynonymLexicon lex;
  long line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (split_whitespace(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::kConfigError,
                  "synonym line " + std::to_string(line_no) + " has no TAB separator", line_no);
    auto head = split_whitespace(line.substr(0, tab));
    if (head.empty())
      throw Error(ErrorCode::kConfigError, "synonym line " + std::to_string(line_no) + " has no word",
                  line_no);
    std::string word = join(head);
    std::string_view rest = line.substr(tab + 1);
    std::size_t p = 0;
    while (p <= rest.size()) {
      std::size_t comma = rest.find(',', p);
      if (comma == std::string_view::npos) comma = rest.size();
      std::string syn = join(split_whitespace(rest.substr(p, comma - p)));
      if (!syn.empty()) lex.add(word, syn);
      p = comma + 1;
    }
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Dictionary

void OntologicalDictionary::insert(MatchTier tier, const std::string &key, const Term &term,
                                   std::size_t len) {
  if (key.empty()) return;
  auto &bucket = tiers_[static_cast<int>(tier)][key];
  for (auto &m : bucket) {
    if (m.iri == term.iri) {
      m.label_length = std::max(m.label_length, len);
      return;
    }
  }
  bucket.push_back({term.iri, term.kind, tier, len});
}

OntologicalDictionary OntologicalDictionary::build(const OntologyStore &store,
                                                   const SynonymLexicon &syn,
                                                   const TextProcessor &text) {
  return build(store, syn, text, Options{});
}

OntologicalDictionary OntologicalDictionary::build(const OntologyStore &store,
                                                   const SynonymLexicon &syn,
                                                   const TextProcessor &text,
                                                   const Options &options) {
  OntologicalDictionary dict;
  dict.text_ = text;

  auto derived_keys = [&](const std::vector<std::string> &words, MatchTier surface_tier,
                          const Term &term, std::size_t len) {
    std::vector<std::string> stems, skeletons;
    for (const auto &w : words) {
      stems.push_back(text.stem(w));
      skeletons.push_back(text.skeleton(stems.back()));
    }
    dict.insert(surface_tier, join(words), term, len);
    dict.insert(MatchTier::kStem, join(stems), term, len);
    dict.insert(MatchTier::kSkeleton, join(skeletons), term, len);
  };

  for (const auto &[iri, term] : store.terms()) {
    for (const auto &label : term.labels) {
      if (!options.languages.count(label.lang)) continue;
      const std::size_t len = utf8::length(label.text);
      std::vector<std::string> words = text.normalize_all(split_whitespace(label.text));
      if (words.empty()) continue;
      std::vector<std::string> content = text.content_words(words);

      dict.insert(MatchTier::kExact, join(words), term, len);
      derived_keys(content, MatchTier::kExact, term, len);

      for (std::size_t i = 0; i < content.size(); ++i) {
        for (const auto &s : syn.synonyms(content[i])) {
          std::vector<std::string> variant = content;
          variant[i] = s;
          variant = text.normalize_all(split_whitespace(join(variant)));
          derived_keys(variant, MatchTier::kSynonym, term, len);
        }
      }
    }
  }
  return dict;
}

std::size_t OntologicalDictionary::size() const {
  std::size_t n = 0;
  for (const auto &t : tiers_) n += t.size();
  return n;
}

std::vector<DictMatch> OntologicalDictionary::lookup(const std::vector<std::string> &phrase) const {
  std::vector<std::string> words = text_.normalize_all(phrase);
  if (words.empty()) return {};
  std::vector<std::string> content = text_.content_words(words);
  std::vector<std::string> stems, skeletons;
  for (const auto &w : content) {
    stems.push_back(text_.stem(w));
    skeletons.push_back(text_.skeleton(stems.back()));
  }

  std::map<std::string, DictMatch> best;
  auto collect = [&](MatchTier tier, const std::string &key) {
    const KeyMap &m = keys(tier);
    auto it = m.find(key);
    if (it == m.end()) return;
    for (const auto &hit : it->second) {
      auto [pos, inserted] = best.try_emplace(hit.iri, hit);
      if (inserted) continue;
      DictMatch &cur = pos->second;
      if (hit.tier < cur.tier || (hit.tier == cur.tier && hit.label_length > cur.label_length))
        cur = hit;
    }
  };
  for (MatchTier surface : {MatchTier::kExact, MatchTier::kSynonym}) {
    collect(surface, join(content));
    collect(surface, join(words));
  }
  collect(MatchTier::kStem, join(stems));
  collect(MatchTier::kSkeleton, join(skeletons));

  std::vector<DictMatch> out;
  for (auto &[iri, m] : best) out.push_back(std::move(m));
  std::sort(out.begin(), out.end(), [](const DictMatch &a, const DictMatch &b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.label_length != b.label_length) return a.label_length > b.label_length;
    return a.iri < b.iri;
  });
  return out;
}

}  // namespace arsparql
