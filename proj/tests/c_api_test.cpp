// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "arsparql/arsparql.h"

namespace {

std::string data(const char *name) { return std::string(ARSPARQL_DATA_DIR) + "/" + name; }

std::string slurp(const char *name) {
  std::ifstream in(data(name), std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  std::string onto = data("diseases.nt"), syn = data("synonyms.tsv"), stop = data("stopwords.txt");
  arsparql_pipeline *p = nullptr;

  Fixture() {
    arsparql_config cfg{};
    cfg.ontology_path = onto.c_str();
    cfg.synonyms_path = syn.c_str();
    cfg.stopwords_path = stop.c_str();
    REQUIRE(arsparql_pipeline_open(&cfg, &p) == ARSPARQL_OK);
  }
  ~Fixture() { arsparql_pipeline_close(p); }
};

int pick_first(void *user, const char *, const char *, const char *const *, size_t n) {
  *static_cast<size_t *>(user) = n;
  return 0;
}

int refuse(void *, const char *, const char *, const char *const *, size_t) { return -1; }

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(arsparql_version()) > 0);
  CHECK(std::string(arsparql_status_name(ARSPARQL_E_TRANSLATION)) == "TRANSLATION");
}

TEST_CASE("argument checks") {
  arsparql_pipeline *p = nullptr;
  CHECK(arsparql_pipeline_open(nullptr, &p) == ARSPARQL_E_INVALID_ARGUMENT);
  arsparql_config cfg{};
  CHECK(arsparql_pipeline_open(&cfg, &p) == ARSPARQL_E_INVALID_ARGUMENT);
  CHECK(std::string(arsparql_last_error()).size() > 0);
  std::string missing = data("nope.nt");
  cfg.ontology_path = missing.c_str();
  CHECK(arsparql_pipeline_open(&cfg, &p) == ARSPARQL_E_IO);
  CHECK(p == nullptr);
  arsparql_pipeline_close(nullptr);
  arsparql_result_free(nullptr);
  arsparql_string_free(nullptr);
}

TEST_CASE_FIXTURE(Fixture, "translate the gout question") {
  const std::string tree = slurp("trees/gout.tree");
  arsparql_result *r = nullptr;
  REQUIRE(arsparql_translate(p, "ما علاج المرض الذي يسمى داء الملوك؟", tree.c_str(), nullptr,
                             nullptr, &r) == ARSPARQL_OK);
  CHECK(arsparql_result_ok(r) == 1);
  CHECK(std::string(arsparql_result_sparql(r)) + "\n" == slurp("golden/gout.sparql"));
  CHECK(std::string(arsparql_result_trace_json(r)).find("\"ok\": true") != std::string::npos);
  CHECK(arsparql_result_chooser_calls(r) == 0);

  char *canon_a = nullptr, *canon_b = nullptr;
  REQUIRE(arsparql_canonicalize(p, arsparql_result_sparql(r), &canon_a) == ARSPARQL_OK);
  REQUIRE(arsparql_canonicalize(p,
                                "SELECT ?x WHERE {?x rdf:type :Cure . ?x :cures ?v . ?v rdf:type "
                                ":Disease . ?v :hasName \"داء الملوك\"}",
                                &canon_b) == ARSPARQL_OK);
  CHECK(std::string(canon_a) == std::string(canon_b));
  arsparql_string_free(canon_a);
  arsparql_string_free(canon_b);
  arsparql_result_free(r);
}

TEST_CASE_FIXTURE(Fixture, "translation failure still yields a result") {
  arsparql_result *r = nullptr;
  CHECK(arsparql_translate(p, "ما عيوب الكمبيوتر؟",
                           "(S (NP (WP ما)) (NP (NN عيوب) (DTNN الكمبيوتر)) (PUNC ؟))", nullptr,
                           nullptr, &r) == ARSPARQL_E_TRANSLATION);
  REQUIRE(r != nullptr);
  CHECK(arsparql_result_ok(r) == 0);
  CHECK(arsparql_result_sparql(r) == nullptr);
  CHECK(std::string(arsparql_result_failure_stage(r)) == "entity identification");
  arsparql_result_free(r);
}

TEST_CASE("chooser callback") {
  std::string onto = data("geography.nt"), stop = data("stopwords.txt");
  arsparql_config cfg{};
  cfg.ontology_path = onto.c_str();
  cfg.stopwords_path = stop.c_str();
  arsparql_pipeline *p = nullptr;
  REQUIRE(arsparql_pipeline_open(&cfg, &p) == ARSPARQL_OK);
  const std::string tree = slurp("trees/texas.tree");
  const char *q = "أذكر أسماء المدن في ولاية تكساس؟";

  size_t offered = 0;
  arsparql_result *r = nullptr;
  REQUIRE(arsparql_translate(p, q, tree.c_str(), pick_first, &offered, &r) == ARSPARQL_OK);
  CHECK(offered == 2);
  CHECK(arsparql_result_chooser_calls(r) == 1);
  CHECK(std::string(arsparql_result_sparql(r)).find(":isCityOf :Texas") != std::string::npos);
  arsparql_result_free(r);

  CHECK(arsparql_translate(p, q, tree.c_str(), refuse, nullptr, &r) == ARSPARQL_E_TRANSLATION);
  arsparql_result_free(r);
  CHECK(arsparql_translate(p, q, tree.c_str(), nullptr, nullptr, &r) == ARSPARQL_E_TRANSLATION);
  arsparql_result_free(r);
  arsparql_pipeline_close(p);
}

TEST_CASE_FIXTURE(Fixture, "dictionary, eval and metrics") {
  char *out = nullptr;
  REQUIRE(arsparql_dict_lookup(p, "علاج", &out) == ARSPARQL_OK);
  CHECK(std::string(out) == ":Cure CLASS EXACT\n");
  arsparql_string_free(out);

  const std::string dataset = slurp("diseases_gold.json");
  char *json = nullptr, *text = nullptr;
  REQUIRE(arsparql_eval(p, dataset.c_str(), &json, &text) == ARSPARQL_OK);
  CHECK(std::string(text).find("supported-subset recall: 100.00%") != std::string::npos);
  arsparql_string_free(json);
  arsparql_string_free(text);
  CHECK(arsparql_eval(p, "[{}]", nullptr, nullptr) == ARSPARQL_E_SCHEMA);

  double precision = 0, recall = 0;
  int defined = 0;
  REQUIRE(arsparql_metrics(514, 638, 877, &precision, &defined, &recall) == ARSPARQL_OK);
  CHECK(defined == 1);
  CHECK(precision == doctest::Approx(80.5643).epsilon(1e-4));
  CHECK(recall == doctest::Approx(58.6089).epsilon(1e-4));
  CHECK(arsparql_metrics(5, 4, 10, &precision, &defined, &recall) == ARSPARQL_E_COUNT_ORDER);
  REQUIRE(arsparql_metrics(0, 0, 3, &precision, &defined, &recall) == ARSPARQL_OK);
  CHECK(defined == 0);
}

TEST_CASE("external parser hook") {
  const std::string parser = data("fake_parser.sh");
  char *tree = nullptr;
  REQUIRE(arsparql_parse_external(parser.c_str(), "ما المرض الذي يصيب البنكرياس؟", &tree) ==
          ARSPARQL_OK);
  CHECK(std::string(tree).rfind("(S (NP (WP ما))", 0) == 0);
  arsparql_string_free(tree);
  CHECK(arsparql_parse_external(parser.c_str(), "سؤال آخر", &tree) == ARSPARQL_E_IO);
}

TEST_CASE("canonicalize without a pipeline") {
  char *a = nullptr;
  REQUIRE(arsparql_canonicalize(nullptr, "SELECT ?x WHERE { ?x a <http://e/C> }", &a) == ARSPARQL_OK);
  arsparql_string_free(a);
  CHECK(arsparql_canonicalize(nullptr, "SELECT * WHERE { }", &a) == ARSPARQL_E_OUT_OF_SUBSET);
}
