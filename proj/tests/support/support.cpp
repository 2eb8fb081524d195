#include "support.hpp"

#include <algorithm>
#include <bit>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "arsparql/artext.hpp"
#include "arsparql/mapper.hpp"
#include "arsparql/npx.hpp"
#include "arsparql/ptree.hpp"
#include "arsparql/sparqlgen.hpp"

namespace testsupport {

using namespace arsparql;

std::string data_path(std::string_view relative) {
  return std::string(ARSPARQL_DATA_DIR) + "/" + std::string(relative);
}

std::string slurp(std::string_view relative) { return read_file(data_path(relative)); }

PipelineConfig diseases_config() {
  PipelineConfig c;
  c.ontology_path = data_path("diseases.nt");
  c.synonyms_path = data_path("synonyms.tsv");
  c.stopwords_path = data_path("stopwords.txt");
  c.question_words_path = data_path("question_words.txt");
  c.order_words_path = data_path("order_words.txt");
  return c;
}

PipelineConfig geography_config() {
  PipelineConfig c;
  c.ontology_path = data_path("geography.nt");
  c.stopwords_path = data_path("stopwords.txt");
  return c;
}

const Pipeline &diseases() {
  static const Pipeline p = Pipeline::load(diseases_config());
  return p;
}

const Pipeline &geography() {
  static const Pipeline p = Pipeline::load(geography_config());
  return p;
}

std::vector<DatasetCase> diseases_gold() { return load_dataset(slurp("diseases_gold.json")); }
std::vector<DatasetCase> geography_gold() { return load_dataset(slurp("geography_gold.json")); }

std::vector<std::string> fixture_trees() {
  std::vector<std::string> out;
  std::vector<std::filesystem::path> files;
  for (const auto &e : std::filesystem::directory_iterator(data_path("trees")))
    if (e.path().extension() == ".tree") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto &f : files) out.push_back(read_file(f.string()));
  for (const auto &c : diseases_gold()) out.push_back(c.tree);
  for (const auto &c : geography_gold()) out.push_back(c.tree);
  return out;
}

// ---------------------------------------------------------------------------
// LCA

namespace {

constexpr const char *kAlphabet[4] = {"NP", "VP", "NN", "CC"};

// Enumerates ordered trees node by node in pre-order. Each node is either
// given a new child or closed; the root closes only once all nodes exist.
class ShapeEnumerator {
 public:
  ShapeEnumerator(int n, PropertyResult &res) : n_(n), res_(res), parent_(n, -1), anc_(n, 0) {}

  void run() {
    anc_[0] = 1u;
    used_ = 1;
    buf_ = std::string("(") + kAlphabet[0];
    stack_ = {0};
    has_child_.assign(n_, 0);
    step();
  }

 private:
  void step() {
    if (!res_.ok) return;
    if (stack_.empty()) {
      check();
      return;
    }
    const int top = stack_.back();
    if (used_ < n_) {
      const int id = used_++;
      const char saved = has_child_[top];
      has_child_[top] = 1;
      parent_[id] = top;
      anc_[id] = anc_[top] | (1u << id);
      const std::size_t mark = buf_.size();
      buf_ += " (";
      buf_ += kAlphabet[(id * 7 + static_cast<int>(stack_.size()) * 3) % 4];
      stack_.push_back(id);
      has_child_[id] = 0;
      step();
      stack_.pop_back();
      buf_.resize(mark);
      has_child_[top] = saved;
      --used_;
    }
    if (stack_.size() > 1 || used_ == n_) {
      const std::size_t mark = buf_.size();
      buf_ += has_child_[top] ? ")" : " w)";
      stack_.pop_back();
      step();
      stack_.push_back(top);
      buf_.resize(mark);
    }
  }

  void check() {
    const ParseTree t = ParseTree::parse(buf_);
    if (static_cast<int>(t.size()) != n_) {
      res_.fail("node count mismatch for " + buf_);
      return;
    }
    for (int a = 0; a < n_; ++a) {
      if (t.node(a).parent != parent_[a]) {
        res_.fail("parent mismatch for " + buf_);
        return;
      }
      for (int b = 0; b < n_; ++b) {
        // Deepest shared element of the two root paths: common ancestors are
        // exactly the common bits and pre-order puts the deepest one last.
        const int expected = std::bit_width(anc_[a] & anc_[b]) - 1;
        if (t.lca(a, b) != expected) {
          res_.fail("lca(" + std::to_string(a) + "," + std::to_string(b) + ") on " + buf_);
          return;
        }
        ++res_.checked;
      }
    }
  }

  int n_;
  PropertyResult &res_;
  std::vector<int> parent_;
  std::vector<std::uint32_t> anc_;
  std::vector<int> stack_;
  std::vector<char> has_child_;
  int used_ = 0;
  std::string buf_;
};

std::vector<int> root_path(const std::vector<int> &parent, int v) {
  std::vector<int> path;
  for (; v != -1; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

PropertyResult lca_exhaustive(int max_nodes) {
  PropertyResult res;
  for (int n = 1; n <= max_nodes && res.ok; ++n) ShapeEnumerator(n, res).run();
  return res;
}

RandomTree random_tree(int nodes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomTree out;
  out.parent.assign(nodes, -1);
  std::vector<std::vector<int>> children(nodes);
  std::vector<std::string> tags(nodes);
  std::vector<int> rightmost = {0};  // path from the root to the last node
  tags[0] = kAlphabet[rng() % 4];
  for (int i = 1; i < nodes; ++i) {
    const std::size_t k = rng() % rightmost.size();
    const int p = rightmost[k];
    out.parent[i] = p;
    children[p].push_back(i);
    tags[i] = kAlphabet[rng() % 4];
    rightmost.resize(k + 1);
    rightmost.push_back(i);
  }
  auto render = [&](auto &&self, int v) -> std::string {
    std::string s = "(" + tags[v];
    if (children[v].empty()) return s + " w" + std::to_string(v) + ")";
    for (int c : children[v]) s += " " + self(self, c);
    return s + ")";
  };
  auto walk = [&](auto &&self, int v) -> void {
    out.preorder_tags.push_back(tags[v]);
    for (int c : children[v]) self(self, c);
  };
  out.text = render(render, 0);
  walk(walk, 0);
  return out;
}

PropertyResult lca_random(int min_nodes, int max_nodes, int trees, std::uint64_t seed) {
  PropertyResult res;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < trees && res.ok; ++k) {
    const int n = min_nodes + static_cast<int>(rng() % (max_nodes - min_nodes + 1));
    const RandomTree rt = random_tree(n, rng());
    const ParseTree t = ParseTree::parse(rt.text);
    for (int a = 0; a < n && res.ok; ++a) {
      const auto pa = root_path(rt.parent, a);
      for (int b = 0; b < n; ++b) {
        const auto pb = root_path(rt.parent, b);
        std::size_t i = 0;
        while (i < pa.size() && i < pb.size() && pa[i] == pb[i]) ++i;
        const int expected = pa[i - 1];
        const int got = t.lca(a, b);
        bool good = got == expected && got == t.lca(b, a) && t.dominates(got, a) &&
                    t.dominates(got, b);
        for (NodeId c : t.node(got).children)
          if (t.dominates(c, a) && t.dominates(c, b)) good = false;
        if (!good) {
          res.fail("lca(" + std::to_string(a) + "," + std::to_string(b) + ") on " + rt.text);
          break;
        }
        ++res.checked;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// normalization

PropertyResult normalize_idempotence(int words, std::uint64_t seed) {
  std::vector<char32_t> pool;
  for (char32_t c = 0x0621; c <= 0x064A; ++c) pool.push_back(c);
  for (char32_t c = 0x064B; c <= 0x0652; ++c) pool.push_back(c);
  for (char32_t c : {U'ـ', U'ٰ', U'ٱ', U'_', U'a', U'Z', U'0', U'؟'})
    pool.push_back(c);
  // Characters that must not survive normalization.
  std::set<char32_t> banned = {U'آ', U'أ', U'إ', U'ٱ', U'ة',
                               U'ى', U'ـ', U'ٰ', U'_'};
  for (char32_t c = 0x064B; c <= 0x0652; ++c) banned.insert(c);

  PropertyResult res;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < words && res.ok; ++i) {
    std::u32string w(rng() % 13, U' ');
    for (auto &c : w) c = pool[rng() % pool.size()];
    const std::string word = utf8::encode(w);
    const std::string once = normalize(word);
    if (normalize(once) != once) res.fail("not idempotent on '" + word + "'");
    for (char32_t c : utf8::decode(once))
      if (banned.count(c)) res.fail("rule character left in normalize('" + word + "')");
    ++res.checked;
  }
  return res;
}

// ---------------------------------------------------------------------------
// NP extraction

PropertyResult np_noncontainment(const std::vector<std::string> &trees) {
  PropertyResult res;
  for (const auto &text : trees) {
    const ParseTree t = ParseTree::parse(text);
    const auto nps = extract_nps(t);
    for (std::size_t i = 0; i < nps.size(); ++i) {
      for (std::size_t j = 0; j < nps.size(); ++j) {
        if (i == j) continue;
        const Span a = nps[i].span, b = nps[j].span;
        if (t.dominates(nps[i].node, nps[j].node) || a.end > b.begin && b.end > a.begin)
          res.fail("NPs '" + nps[i].text() + "' and '" + nps[j].text() + "' overlap in " + text);
      }
    }
    ++res.checked;
  }
  return res;
}

// ---------------------------------------------------------------------------
// canonical form

namespace {

void rename(std::vector<Pattern> &patterns, const std::map<std::string, std::string> &m) {
  auto term = [&](QTerm &q) {
    if (q.is_var()) q.value = m.at(q.value);
  };
  for (auto &p : patterns) {
    term(p.triple.s);
    term(p.triple.p);
    term(p.triple.o);
    if (p.kind == Pattern::Kind::kFilter) {
      p.filter.var = m.at(p.filter.var);
      term(p.filter.value);
    }
    rename(p.body, m);
    for (auto &b : p.branches) rename(b, m);
  }
}

}  // namespace

PropertyResult canonical_renaming(const std::vector<std::string> &queries, int renamings,
                                  std::uint64_t seed, const PrefixMap &context) {
  PropertyResult res;
  std::mt19937_64 rng(seed);
  for (const auto &text : queries) {
    const SparqlQuery q = parse_sparql(text);
    const std::string reference = canonicalize(q, context);
    auto vars = query_variables(q);
    for (const auto &v : q.select_vars)
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    PrefixMap prefixes = context;
    for (const auto &[k, v] : q.prefixes) prefixes[k] = v;
    for (const auto &[k, v] : builtin_prefixes()) prefixes.emplace(k, v);

    for (int r = 0; r < renamings && res.ok; ++r) {
      std::vector<std::size_t> ids(vars.size());
      for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
      std::shuffle(ids.begin(), ids.end(), rng);
      std::map<std::string, std::string> m;
      const std::string stem = std::string(1, static_cast<char>('a' + rng() % 26));
      for (std::size_t i = 0; i < vars.size(); ++i)
        m[vars[i]] = stem + std::to_string(ids[i]) + "_" + std::to_string(rng() % 1000);

      SparqlQuery renamed = q;
      for (auto &v : renamed.select_vars) v = m.at(v);
      rename(renamed.patterns, m);
      // Shuffle the basic triples among their own slots.
      std::vector<std::size_t> slots;
      for (std::size_t i = 0; i < renamed.patterns.size(); ++i)
        if (renamed.patterns[i].kind == Pattern::Kind::kTriple) slots.push_back(i);
      std::vector<Pattern> triples;
      for (auto i : slots) triples.push_back(renamed.patterns[i]);
      std::shuffle(triples.begin(), triples.end(), rng);
      for (std::size_t k = 0; k < slots.size(); ++k) renamed.patterns[slots[k]] = triples[k];

      const std::string text2 = serialize(renamed, prefixes);
      if (canonicalize(text2, context) != reference)
        res.fail("renaming changed the canonical form of:\n" + text + "\nrenamed:\n" + text2);
      ++res.checked;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// completion oracle

namespace {

const std::string kTop(vocab::kTop);
const std::string kLit(vocab::kLiteral);

// Schema knowledge recomputed from the raw statements only.
struct RawSchema {
  std::set<std::string> classes, object_props, datatype_props, instances;
  std::map<std::string, std::set<std::string>> super;  // reflexive-transitive
  std::map<std::string, std::set<std::string>> domain, range, types;

  explicit RawSchema(const OntologyStore &raw) {
    std::map<std::string, std::set<std::string>> direct_super;
    for (const auto &s : raw.statements()) {
      const std::string &o = s.object.value;
      if (s.object.literal) continue;
      if (s.predicate == vocab::kType) {
        if (o == "owl:Class" || o == "rdfs:Class") classes.insert(s.subject);
        if (o == "owl:ObjectProperty" || o == "owl:TransitiveProperty" ||
            o == "owl:SymmetricProperty")
          object_props.insert(s.subject);
        if (o == "owl:DatatypeProperty") datatype_props.insert(s.subject);
      } else if (s.predicate == vocab::kSubClassOf) {
        direct_super[s.subject].insert(o);
      } else if (s.predicate == vocab::kDomain) {
        domain[s.subject].insert(o);
      } else if (s.predicate == vocab::kRange) {
        range[s.subject].insert(o);
      }
    }
    for (auto &[p, rs] : range)
      for (const auto &r : rs)
        if (r.rfind("xsd:", 0) == 0 || r == "rdfs:Literal") datatype_props.insert(p);
    for (const auto &p : datatype_props) object_props.erase(p);
    for (const auto &s : raw.statements())
      if (s.predicate == vocab::kType && classes.count(s.object.value)) {
        instances.insert(s.subject);
        types[s.subject].insert(s.object.value);
      }
    // Reflexive-transitive closure by repeated expansion.
    for (const auto &c : classes) super[c] = {c};
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto &[c, ups] : super) {
        std::set<std::string> next = ups;
        for (const auto &u : ups)
          for (const auto &d : direct_super[u]) next.insert(d);
        if (next.size() != ups.size()) {
          ups = next;
          grew = true;
        }
      }
    }
  }

  std::set<std::string> classes_of(const std::string &term) const {
    std::set<std::string> out;
    if (classes.count(term)) return super.at(term);
    auto it = types.find(term);
    if (it == types.end()) return out;
    for (const auto &t : it->second)
      for (const auto &u : super.at(t)) out.insert(u);
    return out;
  }

  // (domain, property, range) rows.
  std::vector<std::tuple<std::string, std::string, std::string>> rows() const {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    std::set<std::string> props = object_props;
    props.insert(datatype_props.begin(), datatype_props.end());
    for (const auto &p : props) {
      std::set<std::string> ds = domain.count(p) ? domain.at(p) : std::set<std::string>{kTop};
      std::set<std::string> rs;
      if (datatype_props.count(p)) rs = {kLit};
      else rs = range.count(p) ? range.at(p) : std::set<std::string>{kTop};
      for (const auto &d : ds)
        for (const auto &r : rs) out.emplace_back(d, p, r);
    }
    return out;
  }
};

struct Slot {
  std::string value;
  bool literal = false;
};

bool agrees(const RawSchema &s, const Slot &part, const std::string &cls) {
  if (cls == kTop) return !part.literal;
  if (cls == kLit) return part.literal;
  if (part.literal) return false;
  return s.classes_of(part.value).count(cls) > 0;
}

std::string key(const std::string &s, const std::string &p, const Slot &o) {
  return s + " | " + p + " | " + (o.literal ? "\"" + o.value + "\"" : o.value);
}

}  // namespace

PropertyResult completion_oracle(const std::string &ontology_file) {
  PropertyResult res;
  const OntologyStore raw = OntologyStore::load_file(ontology_file);
  const OntologyStore closed = raw.infer_closure();
  const RawSchema schema(raw);
  const auto rows = schema.rows();

  struct Fixture {
    Slot s, p, o;
  };
  std::vector<Fixture> fixtures;
  for (const auto &[d, p, r] : rows) {
    if (d == kTop || r == kTop) continue;
    fixtures.push_back({{d}, {p}, r == kLit ? Slot{"x", true} : Slot{r}});
  }
  for (const auto &st : raw.statements()) {
    if (!schema.instances.count(st.subject)) continue;
    if (schema.object_props.count(st.predicate) && !st.object.literal &&
        schema.instances.count(st.object.value))
      fixtures.push_back({{st.subject}, {st.predicate}, {st.object.value}});
    if (schema.datatype_props.count(st.predicate) && st.object.literal)
      fixtures.push_back({{st.subject}, {st.predicate}, {st.object.value, true}});
  }

  auto to_part = [&](const Slot &slot) {
    if (slot.literal) return TriplePart::literal(slot.value);
    return TriplePart::term(slot.value, closed.term(slot.value)->kind);
  };

  for (const auto &f : fixtures) {
    bool oracle_valid = false;
    for (const auto &[d, p, r] : rows)
      if (p == f.p.value && agrees(schema, f.s, d) && agrees(schema, f.o, r)) oracle_valid = true;
    CandidateRdfTriple full;
    full.subject = to_part(f.s);
    full.predicate = to_part(f.p);
    full.object = to_part(f.o);
    if (validate_triple(full, closed) != oracle_valid) {
      res.fail("validity disagrees for " + full.str());
      continue;
    }
    if (!oracle_valid) continue;

    for (int blank = 0; blank < 3; ++blank) {
      std::set<std::string> expected;
      for (const auto &[d, p, r] : rows) {
        if (blank == 0 && p == f.p.value && agrees(schema, f.o, r) && d != kTop)
          expected.insert(key(d, p, f.o));
        if (blank == 1 && agrees(schema, f.s, d) && agrees(schema, f.o, r))
          expected.insert(key(f.s.value, p, f.o));
        if (blank == 2 && p == f.p.value && agrees(schema, f.s, d) && r != kTop && r != kLit)
          expected.insert(key(f.s.value, p, Slot{r}));
      }
      CandidateRdfTriple c = full;
      (blank == 0 ? c.subject : blank == 1 ? c.predicate : c.object) = TriplePart::missing();
      std::set<std::string> got;
      for (const auto &out : complete_triple(c, closed))
        got.insert(key(out.subject.value, out.predicate.value,
                       Slot{out.object.value, out.object.is_literal()}));
      if (got != expected) {
        std::string msg = "completion of " + c.str() + " differs: got {";
        for (const auto &g : got) msg += " " + g + ";";
        msg += " } expected {";
        for (const auto &e : expected) msg += " " + e + ";";
        res.fail(msg + " }");
      }
      ++res.checked;
    }
  }
  return res;
}

}  // namespace testsupport
