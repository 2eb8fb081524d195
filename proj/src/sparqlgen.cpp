#include "arsparql/sparqlgen.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "arsparql/artext.hpp"
#include "arsparql/error.hpp"

namespace arsparql {

// ---------------------------------------------------------------------------
// Word lists

WordList::WordList(const std::vector<std::string> &words) {
  for (const auto &w : words) {
    std::string n = normalize(w);
    if (!n.empty()) words_.insert(n);
  }
}

WordList WordList::parse(std::string_view text) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    for (auto &w : split_whitespace(line)) words.push_back(std::move(w));
    start = end + 1;
  }
  return WordList(words);
}

const WordList &WordList::question_default() {
  static const WordList list({"ما", "من", "ماذا", "ماهي", "أين", "متى", "كم"});
  return list;
}

const WordList &WordList::order_default() {
  static const WordList list({"أذكر", "اذكر", "عدد", "سمِّ"});
  return list;
}

bool WordList::contains(std::string_view token) const { return words_.count(normalize(token)) > 0; }

// ---------------------------------------------------------------------------
// Targets and modifiers

QueryTarget extract_target(const ParseTree &tree, const std::vector<NounPhrase> &nps,
                           const WordList &question_words, const WordList &order_words) {
  const auto &leaves = tree.leaves();
  int trigger = -1;
  for (std::size_t i = 0; i < leaves.size() && trigger < 0; ++i) {
    const TreeNode &leaf = tree.node(leaves[i]);
    if ((leaf.tag == "WP" && question_words.contains(*leaf.token)) ||
        order_words.contains(*leaf.token))
      trigger = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < leaves.size() && trigger < 0; ++i)
    if (tree.node(leaves[i]).tag == "WP") trigger = static_cast<int>(i);
  if (trigger < 0) throw Error(ErrorCode::kNoTargetFound, "no question or order word in the query");

  const NounPhrase *best = nullptr;
  for (const auto &np : nps) {
    if (np.span.begin < trigger) continue;
    bool only_triggers = std::all_of(np.tokens.begin(), np.tokens.end(), [&](const auto &t) {
      return question_words.contains(t) || order_words.contains(t);
    });
    if (only_triggers) continue;
    if (!best || np.span.begin < best->span.begin) best = &np;
  }
  if (!best)
    throw Error(ErrorCode::kNoTargetFound,
                "no noun phrase follows '" + *tree.leaf(trigger).token + "'", trigger);
  QueryTarget t;
  t.np = *best;
  t.trigger_leaf = trigger;
  t.trigger = *tree.leaf(trigger).token;
  return t;
}

std::string_view modifier_kind_name(ModifierKind k) {
  switch (k) {
    case ModifierKind::kNegation: return "NEGATION";
    case ModifierKind::kConjunction: return "CONJUNCTION";
    case ModifierKind::kDisjunction: return "DISJUNCTION";
  }
  return "?";
}

ModifierScan extract_modifiers(const ParseTree &tree) {
  static const std::string kLa = normalize("لا"), kGhayr = normalize("غير"), kWa = normalize("و"),
                           kAw = normalize("أو");
  ModifierScan out;
  for (std::size_t i = 0; i < tree.leaves().size(); ++i) {
    const TreeNode &leaf = tree.leaf(static_cast<int>(i));
    const std::string n = normalize(*leaf.token);
    const int pos = static_cast<int>(i);
    if (n == kLa || n == kGhayr) {
      out.descriptors.push_back({ModifierKind::kNegation, *leaf.token, pos});
    } else if (n == kAw) {
      out.descriptors.push_back({ModifierKind::kDisjunction, *leaf.token, pos});
    } else if (n == kWa) {
      out.descriptors.push_back({ModifierKind::kConjunction, *leaf.token, pos});
    } else if (is_comparative(n)) {
      out.unsupported.push_back(*leaf.token);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Query model

std::string QTerm::str() const {
  switch (kind) {
    case Kind::kIri: return value;
    case Kind::kVar: return "?" + value;
    case Kind::kLiteral: {
      std::string out = "\"";
      for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
          out += "\\n";
          continue;
        }
        out += c;
      }
      out += '"';
      if (!lang.empty()) out += "@" + lang;
      if (!datatype.empty()) out += "^^" + datatype;
      return out;
    }
  }
  return value;
}

Pattern Pattern::of(BasicTriple t) {
  Pattern p;
  p.kind = Kind::kTriple;
  p.triple = std::move(t);
  return p;
}
Pattern Pattern::of(FilterExpr f) {
  Pattern p;
  p.kind = Kind::kFilter;
  p.filter = std::move(f);
  return p;
}
Pattern Pattern::optional(std::vector<Pattern> body) {
  Pattern p;
  p.kind = Kind::kOptional;
  p.body = std::move(body);
  return p;
}
Pattern Pattern::union_of(std::vector<std::vector<Pattern>> branches) {
  Pattern p;
  p.kind = Kind::kUnion;
  p.branches = std::move(branches);
  return p;
}
Pattern Pattern::group(std::vector<Pattern> body) {
  Pattern p;
  p.kind = Kind::kGroup;
  p.body = std::move(body);
  return p;
}

namespace {

const QTerm kRdfType = QTerm::iri(std::string(vocab::kType));

void collect_vars(const std::vector<Pattern> &ps, std::vector<std::string> &out) {
  auto add = [&](const std::string &v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto &p : ps) {
    switch (p.kind) {
      case Pattern::Kind::kTriple:
        for (const QTerm *t : {&p.triple.s, &p.triple.p, &p.triple.o})
          if (t->is_var()) add(t->value);
        break;
      case Pattern::Kind::kFilter:
        add(p.filter.var);
        if (p.filter.value.is_var()) add(p.filter.value.value);
        break;
      case Pattern::Kind::kOptional:
      case Pattern::Kind::kGroup: collect_vars(p.body, out); break;
      case Pattern::Kind::kUnion:
        for (const auto &b : p.branches) collect_vars(b, out);
        break;
    }
  }
}

}  // namespace

std::vector<std::string> query_variables(const SparqlQuery &q) {
  std::vector<std::string> out;
  collect_vars(q.patterns, out);
  return out;
}

std::vector<Pattern> apply_negation(const BasicTriple &triple, bool negated,
                                    const std::string &fresh_var, bool object_is_class) {
  if (!negated)
    throw Error(ErrorCode::kContractViolation, "apply_negation called on a non-negated triple");
  if (triple.o.is_var() || triple.p.is_var())
    throw Error(ErrorCode::kContractViolation, "negated triple needs a known predicate and object");
  const QTerm v = QTerm::var(fresh_var);
  std::vector<Pattern> body{Pattern::of(BasicTriple{triple.s, triple.p, v})};
  if (object_is_class)
    body.push_back(Pattern::of(BasicTriple{v, kRdfType, triple.o}));
  else
    body.push_back(Pattern::of(FilterExpr{FilterExpr::Kind::kEquals, fresh_var, triple.o}));
  return {Pattern::optional(std::move(body)),
          Pattern::of(FilterExpr{FilterExpr::Kind::kNotBound, fresh_var, {}})};
}

Pattern apply_disjunction(const std::vector<std::vector<Pattern>> &branches) {
  if (branches.size() < 2)
    throw Error(ErrorCode::kEmptyBranch, "disjunction needs two branches, got " +
                                             std::to_string(branches.size()));
  for (const auto &b : branches)
    if (b.empty()) throw Error(ErrorCode::kEmptyBranch, "empty disjunction branch");
  return Pattern::union_of(branches);
}

SparqlQuery build_query(const std::vector<CandidateRdfTriple> &triples, const QueryTarget &target,
                        const std::vector<ModifierDescriptor> &mods, const OntologyStore &store) {
  if (target.term.empty())
    throw Error(ErrorCode::kTargetUnmatched,
                "target '" + target.np.text() + "' matches no ontology term");
  const std::string target_var = target.variable_name.starts_with("?")
                                     ? target.variable_name.substr(1)
                                     : target.variable_name;

  SparqlQuery q;
  q.select_vars = {target_var};

  std::map<std::string, std::string> class_vars;
  int fresh_count = 0;
  auto fresh = [&] {
    ++fresh_count;
    return fresh_count == 1 ? std::string("var") : "var" + std::to_string(fresh_count);
  };
  auto is_class = [&](const TriplePart &p) {
    return p.is_matched() && (store.is_class(p.value) || p.term_kind == TermKind::kClass);
  };

  // Substitutes one part; a class seen for the first time gets a variable and
  // a pending rdf:type pattern.
  auto substitute = [&](const TriplePart &part, std::vector<Pattern> &types) -> QTerm {
    if (part.is_literal()) return QTerm::literal(part.value);
    if (part.value == target.term) return QTerm::var(target_var);
    if (!is_class(part)) return QTerm::iri(part.value);
    auto it = class_vars.find(part.value);
    if (it != class_vars.end()) return QTerm::var(it->second);
    std::string v = fresh();
    class_vars.emplace(part.value, v);
    types.push_back(Pattern::of(BasicTriple{QTerm::var(v), kRdfType, QTerm::iri(part.value)}));
    return QTerm::var(v);
  };

  // Which triples carry a negation trigger in their relation words.
  std::vector<bool> negated(triples.size(), false);
  for (const auto &m : mods) {
    if (m.kind != ModifierKind::kNegation) continue;
    bool attached = false;
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const auto &leaves = triples[i].predicate_leaves;
      if (std::find(leaves.begin(), leaves.end(), m.position) != leaves.end()) {
        negated[i] = true;
        attached = true;
      }
    }
    if (!attached)
      throw Error(ErrorCode::kUnsupportedModifier,
                  "negation '" + m.trigger_token + "' is not attached to a relation", m.position);
  }

  if (target.term_kind == TermKind::kClass || store.is_class(target.term)) {
    q.patterns.push_back(Pattern::of(
        BasicTriple{QTerm::var(target_var), kRdfType, QTerm::iri(target.term)}));
  }

  std::vector<std::vector<Pattern>> bodies;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto &t = triples[i];
    std::vector<Pattern> types;
    QTerm s = substitute(t.subject, types);
    QTerm p = QTerm::iri(t.predicate.value);
    std::vector<Pattern> body;
    if (negated[i]) {
      const bool object_class = is_class(t.object) && t.object.value != target.term;
      QTerm o = t.object.is_literal() ? QTerm::literal(t.object.value)
                : t.object.value == target.term ? QTerm::var(target_var)
                                                : QTerm::iri(t.object.value);
      body = apply_negation(BasicTriple{s, p, o}, true, fresh(), object_class);
    } else {
      QTerm o = substitute(t.object, types);
      body.push_back(Pattern::of(BasicTriple{s, p, o}));
    }
    body.insert(body.end(), types.begin(), types.end());
    bodies.push_back(std::move(body));
  }

  std::vector<bool> emitted(triples.size(), false);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (emitted[i]) continue;
    const auto &t = triples[i];
    if (t.conjunction_origin == Conjunction::kOr) {
      std::vector<std::vector<Pattern>> branches;
      for (std::size_t j = i; j < triples.size(); ++j) {
        if (triples[j].conjunction_origin == Conjunction::kOr &&
            triples[j].conjunctive_head == t.conjunctive_head) {
          branches.push_back(bodies[j]);
          emitted[j] = true;
        }
      }
      q.patterns.push_back(apply_disjunction(branches));
      continue;
    }
    emitted[i] = true;
    q.patterns.insert(q.patterns.end(), bodies[i].begin(), bodies[i].end());
  }

  std::vector<std::string> vars = query_variables(q);
  if (std::find(vars.begin(), vars.end(), target_var) == vars.end())
    throw Error(ErrorCode::kTargetUnmatched,
                "target term " + target.term + " does not occur in any triple pattern");
  return q;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void used_prefixes(const std::vector<Pattern> &ps, std::set<std::string> &out) {
  auto term = [&](const QTerm &t) {
    const std::string *iri = nullptr;
    if (t.kind == QTerm::Kind::kIri) iri = &t.value;
    if (t.kind == QTerm::Kind::kLiteral && !t.datatype.empty()) iri = &t.datatype;
    if (!iri || iri->empty() || iri->front() == '<') return;
    auto colon = iri->find(':');
    if (colon != std::string::npos) out.insert(iri->substr(0, colon));
  };
  for (const auto &p : ps) {
    switch (p.kind) {
      case Pattern::Kind::kTriple:
        term(p.triple.s);
        term(p.triple.p);
        term(p.triple.o);
        break;
      case Pattern::Kind::kFilter: term(p.filter.value); break;
      case Pattern::Kind::kOptional:
      case Pattern::Kind::kGroup: used_prefixes(p.body, out); break;
      case Pattern::Kind::kUnion:
        for (const auto &b : p.branches) used_prefixes(b, out);
        break;
    }
  }
}

std::string filter_text(const FilterExpr &f) {
  if (f.kind == FilterExpr::Kind::kNotBound) return "FILTER(!bound(?" + f.var + "))";
  return "FILTER(?" + f.var + " = " + f.value.str() + ")";
}

void write_patterns(const std::vector<Pattern> &ps, int indent, std::string &out) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto &p : ps) {
    switch (p.kind) {
      case Pattern::Kind::kTriple:
        out += pad + p.triple.s.str() + " " + p.triple.p.str() + " " + p.triple.o.str() + " .\n";
        break;
      case Pattern::Kind::kFilter: out += pad + filter_text(p.filter) + "\n"; break;
      case Pattern::Kind::kOptional:
        out += pad + "OPTIONAL {\n";
        write_patterns(p.body, indent + 2, out);
        out += pad + "}\n";
        break;
      case Pattern::Kind::kGroup:
        out += pad + "{\n";
        write_patterns(p.body, indent + 2, out);
        out += pad + "}\n";
        break;
      case Pattern::Kind::kUnion:
        for (std::size_t i = 0; i < p.branches.size(); ++i) {
          out += pad + (i ? "} UNION {\n" : "{\n");
          write_patterns(p.branches[i], indent + 2, out);
        }
        out += pad + "}\n";
        break;
    }
  }
}

}  // namespace

std::string serialize(const SparqlQuery &q, const PrefixMap &prefixes) {
  std::set<std::string> used;
  used_prefixes(q.patterns, used);
  std::string out;
  for (const auto &[name, ns] : prefixes)
    if (used.count(name)) out += "PREFIX " + name + ": <" + ns + ">\n";
  out += "SELECT";
  for (const auto &v : q.select_vars) out += " ?" + v;
  out += " WHERE {\n";
  write_patterns(q.patterns, 2, out);
  out += "}";
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Tok {
  enum Kind { kPunct, kIri, kVar, kString, kName, kEnd } kind;
  std::string text;
  std::string lang = {};
  std::string datatype = {};
  std::size_t pos = 0;
};

class SparqlLexer {
 public:
  explicit SparqlLexer(std::string_view s) : s_(s) {}

  [[noreturn]] void fail(const std::string &msg, std::size_t pos) const {
    throw Error(ErrorCode::kOutOfSubset, msg + " at byte " + std::to_string(pos),
                static_cast<long>(pos));
  }

  std::vector<Tok> run() {
    std::vector<Tok> out;
    while (true) {
      skip();
      if (i_ >= s_.size()) break;
      const std::size_t start = i_;
      const char c = s_[i_];
      if (std::string_view("{}().=!,;*").find(c) != std::string_view::npos) {
        ++i_;
        out.push_back({Tok::kPunct, std::string(1, c), {}, {}, start});
      } else if (c == '<') {
        auto end = s_.find('>', i_);
        if (end == std::string_view::npos) fail("unterminated IRI", start);
        out.push_back({Tok::kIri, std::string(s_.substr(i_, end - i_ + 1)), {}, {}, start});
        i_ = end + 1;
      } else if (c == '?' || c == '$') {
        ++i_;
        std::size_t b = i_;
        while (i_ < s_.size() && is_name_char(s_[i_])) ++i_;
        if (i_ == b) fail("empty variable name", start);
        out.push_back({Tok::kVar, std::string(s_.substr(b, i_ - b)), {}, {}, start});
      } else if (c == '"' || c == '\'') {
        Tok t{Tok::kString, read_string(c), {}, {}, start};
        if (i_ < s_.size() && s_[i_] == '@') {
          std::size_t b = ++i_;
          while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-'))
            ++i_;
          t.lang = std::string(s_.substr(b, i_ - b));
        } else if (s_.substr(i_, 2) == "^^") {
          i_ += 2;
          skip();
          std::size_t b = i_;
          if (i_ < s_.size() && s_[i_] == '<') {
            auto end = s_.find('>', i_);
            if (end == std::string_view::npos) fail("unterminated datatype IRI", b);
            i_ = end + 1;
          } else {
            while (i_ < s_.size() && is_name_char(s_[i_])) ++i_;
          }
          t.datatype = std::string(s_.substr(b, i_ - b));
        }
        out.push_back(std::move(t));
      } else if (is_name_char(c)) {
        while (i_ < s_.size() && is_name_char(s_[i_])) ++i_;
        std::string name(s_.substr(start, i_ - start));
        // A prefixed name never ends in '.'; give the dot back.
        while (name.size() > 1 && name.back() == '.') {
          name.pop_back();
          --i_;
        }
        out.push_back({Tok::kName, std::move(name), {}, {}, start});
      } else {
        fail(std::string("unexpected character '") + c + "'", start);
      }
    }
    out.push_back({Tok::kEnd, "", {}, {}, s_.size()});
    return out;
  }

 private:
  static bool is_name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u) || c == '_' || c == ':' || c == '-' || c == '.' ||
           c == '%';
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  std::string read_string(char quote) {
    const std::size_t start = i_;
    std::string out;
    ++i_;
    while (true) {
      if (i_ >= s_.size()) fail("unterminated string", start);
      char c = s_[i_++];
      if (c == quote) break;
      if (c == '\\' && i_ < s_.size()) {
        char e = s_[i_++];
        out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        continue;
      }
      out += c;
    }
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

bool keyword(const Tok &t, std::string_view kw) {
  if (t.kind != Tok::kName || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i)
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  return true;
}

class SparqlParser {
 public:
  explicit SparqlParser(std::string_view text) : lex_(text), toks_(lex_.run()) {}

  SparqlQuery parse() {
    SparqlQuery q;
    while (keyword(peek(), "PREFIX")) {
      next();
      const Tok &name = next();
      if (name.kind != Tok::kName || name.text.back() != ':') fail("prefix name expected", name);
      const Tok &iri = next();
      if (iri.kind != Tok::kIri) fail("namespace IRI expected", iri);
      q.prefixes[name.text.substr(0, name.text.size() - 1)] = iri.text.substr(1, iri.text.size() - 2);
    }
    if (!keyword(peek(), "SELECT")) fail("SELECT expected", peek());
    next();
    while (peek().kind == Tok::kVar) q.select_vars.push_back(next().text);
    if (q.select_vars.empty()) fail("projection variables expected", peek());
    if (keyword(peek(), "WHERE")) next();
    q.patterns = group();
    if (peek().kind != Tok::kEnd) fail("trailing content after WHERE clause", peek());
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string &msg, const Tok &t) const {
    lex_.fail(msg + (t.kind == Tok::kEnd ? " (end of input)" : " near '" + t.text + "'"), t.pos);
  }
  const Tok &peek() const { return toks_[k_]; }
  const Tok &next() { return toks_[k_ < toks_.size() - 1 ? k_++ : k_]; }
  bool punct(char c) const { return peek().kind == Tok::kPunct && peek().text[0] == c; }
  void expect(char c) {
    if (!punct(c)) fail(std::string("'") + c + "' expected", peek());
    next();
  }

  std::vector<Pattern> group() {
    expect('{');
    std::vector<Pattern> out;
    while (!punct('}')) {
      if (peek().kind == Tok::kEnd) fail("unclosed group", peek());
      if (punct('.')) {
        next();
      } else if (keyword(peek(), "FILTER")) {
        next();
        expect('(');
        out.push_back(Pattern::of(filter_expr()));
        expect(')');
      } else if (keyword(peek(), "OPTIONAL")) {
        next();
        out.push_back(Pattern::optional(group()));
      } else if (punct('{')) {
        std::vector<std::vector<Pattern>> branches{group()};
        while (keyword(peek(), "UNION")) {
          next();
          branches.push_back(group());
        }
        out.push_back(branches.size() == 1 ? Pattern::group(std::move(branches[0]))
                                           : Pattern::union_of(std::move(branches)));
      } else {
        BasicTriple t;
        t.s = term(false);
        t.p = term(true);
        t.o = term(false);
        if (t.s.kind == QTerm::Kind::kLiteral || t.p.kind == QTerm::Kind::kLiteral)
          fail("literal outside object position", peek());
        out.push_back(Pattern::of(std::move(t)));
        if (punct(';') || punct(',')) fail("predicate/object lists are outside the subset", peek());
      }
    }
    next();
    return out;
  }

  FilterExpr filter_expr() {
    if (punct('(')) {
      next();
      FilterExpr f = filter_expr();
      expect(')');
      return f;
    }
    if (punct('!')) {
      next();
      if (!keyword(peek(), "BOUND")) fail("only !bound(...) negation is supported", peek());
      next();
      expect('(');
      const Tok &v = next();
      if (v.kind != Tok::kVar) fail("variable expected in bound()", v);
      expect(')');
      return {FilterExpr::Kind::kNotBound, v.text, {}};
    }
    QTerm lhs = term(false);
    expect('=');
    QTerm rhs = term(false);
    if (!lhs.is_var()) std::swap(lhs, rhs);
    if (!lhs.is_var()) fail("equality filter needs a variable", peek());
    return {FilterExpr::Kind::kEquals, lhs.value, rhs};
  }

  QTerm term(bool predicate) {
    const Tok &t = next();
    switch (t.kind) {
      case Tok::kVar: return QTerm::var(t.text);
      case Tok::kIri: return QTerm::iri(t.text);
      case Tok::kString: {
        QTerm q = QTerm::literal(t.text);
        q.lang = t.lang;
        q.datatype = t.datatype;
        return q;
      }
      case Tok::kName:
        if (predicate && t.text == "a") return kRdfType;
        if (t.text.find(':') == std::string::npos) fail("unsupported token", t);
        return QTerm::iri(t.text);
      default: fail("term expected", t);
    }
  }

  SparqlLexer lex_;
  std::vector<Tok> toks_;
  std::size_t k_ = 0;
};

}  // namespace

SparqlQuery parse_sparql(std::string_view text) { return SparqlParser(text).parse(); }

// ---------------------------------------------------------------------------
// Canonical form

namespace {

std::string expand(const std::string &iri, const PrefixMap &declared, const PrefixMap &context) {
  if (iri.empty() || iri.front() == '<') return iri;
  auto colon = iri.find(':');
  if (colon == std::string::npos) return iri;
  const std::string prefix = iri.substr(0, colon);
  static const PrefixMap builtin = builtin_prefixes();
  for (const PrefixMap *m : {&declared, &context, &builtin}) {
    auto it = m->find(prefix);
    if (it != m->end()) return "<" + it->second + iri.substr(colon + 1) + ">";
  }
  return iri;
}

void expand_terms(std::vector<Pattern> &ps, const PrefixMap &declared, const PrefixMap &context) {
  auto fix = [&](QTerm &t) {
    if (t.kind == QTerm::Kind::kIri) t.value = expand(t.value, declared, context);
    if (t.kind == QTerm::Kind::kLiteral && !t.datatype.empty())
      t.datatype = expand(t.datatype, declared, context);
  };
  for (auto &p : ps) {
    fix(p.triple.s);
    fix(p.triple.p);
    fix(p.triple.o);
    fix(p.filter.value);
    expand_terms(p.body, declared, context);
    for (auto &b : p.branches) expand_terms(b, declared, context);
  }
}

std::vector<Pattern> flatten(const std::vector<Pattern> &ps) {
  std::vector<Pattern> out;
  for (const auto &p : ps) {
    if (p.kind == Pattern::Kind::kGroup) {
      for (auto &q : flatten(p.body)) out.push_back(std::move(q));
      continue;
    }
    Pattern q = p;
    q.body = flatten(p.body);
    for (auto &b : q.branches) b = flatten(b);
    out.push_back(std::move(q));
  }
  return out;
}

using Naming = std::function<std::string(const std::string &)>;

std::string term_text(const QTerm &t, const Naming &name) {
  return t.is_var() ? name(t.value) : t.str();
}

std::string render_filter(const FilterExpr &f, const Naming &name) {
  if (f.kind == FilterExpr::Kind::kNotBound) return "FILTER(!bound(" + name(f.var) + "))";
  std::string a = name(f.var), b = term_text(f.value, name);
  if (f.value.is_var() && b < a) std::swap(a, b);
  return "FILTER(" + a + " = " + b + ")";
}

std::string render_group(const std::vector<Pattern> &ps, const Naming &name);

std::string render_pattern(const Pattern &p, const Naming &name) {
  switch (p.kind) {
    case Pattern::Kind::kTriple:
      return term_text(p.triple.s, name) + " " + term_text(p.triple.p, name) + " " +
             term_text(p.triple.o, name) + " .";
    case Pattern::Kind::kFilter: return render_filter(p.filter, name);
    case Pattern::Kind::kOptional: return "OPTIONAL{ " + render_group(p.body, name) + " }";
    case Pattern::Kind::kGroup: return "{ " + render_group(p.body, name) + " }";
    case Pattern::Kind::kUnion: {
      std::set<std::string> branches;
      for (const auto &b : p.branches) branches.insert(render_group(b, name));
      if (branches.size() == 1) return *branches.begin();
      std::string out;
      for (const auto &b : branches) out += (out.empty() ? "{ " : " UNION { ") + b + " }";
      return out;
    }
  }
  return {};
}

std::string render_group(const std::vector<Pattern> &ps, const Naming &name) {
  std::set<std::string> items;
  for (const auto &p : ps) items.insert(render_pattern(p, name));
  std::string out;
  for (const auto &i : items) out += (out.empty() ? "" : " ") + i;
  return out;
}

// Local contexts of variable occurrences: the enclosing block path plus the
// pattern text with `self` marked and other variables shown by colour.
void occurrence_contexts(const std::vector<Pattern> &ps, const std::string &path,
                         const std::map<std::string, std::string> &color,
                         std::map<std::string, std::vector<std::string>> &ctx) {
  for (const auto &p : ps) {
    std::vector<std::string> vars;
    if (p.kind == Pattern::Kind::kTriple) {
      for (const QTerm *t : {&p.triple.s, &p.triple.p, &p.triple.o})
        if (t->is_var()) vars.push_back(t->value);
    } else if (p.kind == Pattern::Kind::kFilter) {
      vars.push_back(p.filter.var);
      if (p.filter.value.is_var()) vars.push_back(p.filter.value.value);
    }
    for (const auto &self : vars) {
      Naming n = [&](const std::string &v) { return v == self ? "@" : "?" + color.at(v); };
      ctx[self].push_back(path + "|" + render_pattern(p, n));
    }
    if (p.kind == Pattern::Kind::kOptional || p.kind == Pattern::Kind::kGroup) {
      occurrence_contexts(p.body, path + "/O", color, ctx);
    } else if (p.kind == Pattern::Kind::kUnion) {
      for (const auto &b : p.branches) occurrence_contexts(b, path + "/U", color, ctx);
    }
  }
}

// Sorts a pattern list (recursively) by its rendering under `name`.
void sort_patterns(std::vector<Pattern> &ps, const Naming &name) {
  for (auto &p : ps) {
    sort_patterns(p.body, name);
    for (auto &b : p.branches) sort_patterns(b, name);
    std::stable_sort(p.branches.begin(), p.branches.end(), [&](const auto &a, const auto &b) {
      return render_group(a, name) < render_group(b, name);
    });
  }
  std::stable_sort(ps.begin(), ps.end(), [&](const Pattern &a, const Pattern &b) {
    return render_pattern(a, name) < render_pattern(b, name);
  });
}

}  // namespace

std::string canonicalize(const SparqlQuery &input, const PrefixMap &context) {
  std::vector<Pattern> patterns = flatten(input.patterns);
  expand_terms(patterns, input.prefixes, context);

  SparqlQuery q;
  q.select_vars = input.select_vars;
  q.patterns = patterns;
  std::vector<std::string> vars = query_variables(q);
  for (const auto &v : input.select_vars)
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);

  std::map<std::string, std::string> color;
  std::set<std::string> selected;
  for (std::size_t i = 0; i < input.select_vars.size(); ++i) {
    if (selected.insert(input.select_vars[i]).second)
      color[input.select_vars[i]] = "s" + std::to_string(i);
  }
  for (const auto &v : vars)
    if (!selected.count(v)) color[v] = "v";

  auto distinct = [](const std::map<std::string, std::string> &c) {
    std::set<std::string> s;
    for (const auto &[k, v] : c) s.insert(v);
    return s.size();
  };
  for (std::size_t round = 0; round <= vars.size(); ++round) {
    std::map<std::string, std::vector<std::string>> ctx;
    occurrence_contexts(patterns, "G", color, ctx);
    std::map<std::string, std::string> sig;
    std::set<std::string> sigs;
    for (const auto &v : vars) {
      if (selected.count(v)) continue;
      auto &c = ctx[v];
      std::sort(c.begin(), c.end());
      std::string s = color[v] + "{";
      for (const auto &x : c) s += x + ";";
      sig[v] = s + "}";
      sigs.insert(sig[v]);
    }
    std::map<std::string, std::string> next = color;
    for (const auto &[v, s] : sig) {
      auto rank = std::distance(sigs.begin(), sigs.find(s));
      std::string r = std::to_string(rank);
      next[v] = "v" + std::string(4 - std::min<std::size_t>(4, r.size()), '0') + r;
    }
    const bool stable = distinct(next) == distinct(color);
    color = std::move(next);
    if (stable && round > 0) break;
  }

  // Final names: projection by position, the rest by first occurrence in the
  // colour-sorted pattern list.
  Naming by_color = [&](const std::string &v) { return "?" + color.at(v); };
  sort_patterns(patterns, by_color);
  std::map<std::string, std::string> final_name;
  for (const auto &v : input.select_vars)
    if (!final_name.count(v)) final_name[v] = "?s" + std::to_string(final_name.size());
  SparqlQuery sorted;
  sorted.patterns = patterns;
  int n = 0;
  for (const auto &v : query_variables(sorted))
    if (!final_name.count(v)) final_name[v] = "?v" + std::to_string(n++);
  Naming by_final = [&](const std::string &v) { return final_name.at(v); };

  std::string out = "SELECT";
  for (const auto &v : input.select_vars) out += " " + final_name.at(v);
  return out + " WHERE { " + render_group(patterns, by_final) + " }";
}

std::string canonicalize(std::string_view text, const PrefixMap &context) {
  return canonicalize(parse_sparql(text), context);
}

}  // namespace arsparql
