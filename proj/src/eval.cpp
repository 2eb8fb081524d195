#include "arsparql/eval.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace arsparql {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<DatasetCase> load_dataset(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kSchemaError, std::string("dataset is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kSchemaError, "dataset must be a JSON array");

  std::vector<DatasetCase> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json &rec = doc[i];
    const long pos = static_cast<long>(i);
    auto fail = [&](const std::string &msg) -> Error {
      return Error(ErrorCode::kSchemaError, "case " + std::to_string(i) + ": " + msg, pos);
    };
    if (!rec.is_object()) throw fail("record must be an object");
    for (const char *key : {"id", "question", "tree"})
      if (!rec.contains(key) || !rec[key].is_string()) throw fail(std::string("missing string '") + key + "'");
    if (!rec.contains("gold_sparql")) throw fail("missing 'gold_sparql' (use null when untranslatable)");

    DatasetCase c;
    c.id = rec["id"].get<std::string>();
    c.question = rec["question"].get<std::string>();
    c.tree = rec["tree"].get<std::string>();
    if (c.id.empty()) throw fail("empty id");
    if (!ids.insert(c.id).second) throw fail("duplicate id '" + c.id + "'");
    const json &gold = rec["gold_sparql"];
    if (gold.is_string()) {
      c.gold_sparql = gold.get<std::string>();
    } else if (!gold.is_null()) {
      throw fail("'gold_sparql' must be a string or null");
    }
    if (rec.contains("category")) {
      if (!rec["category"].is_string()) throw fail("'category' must be a string");
      c.category = rec["category"].get<std::string>();
    }
    try {
      ParseTree::parse(c.tree);
      if (c.gold_sparql) parse_sparql(*c.gold_sparql);
    } catch (const Error &e) {
      throw fail(e.what());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::string format_percent(std::size_t num, std::size_t den) {
  // hundredths of a percent, rounded half-up: floor((20000 n + d) / 2d)
  const unsigned long long n = num, d = den;
  const unsigned long long h = (20000ULL * n + d) / (2ULL * d);
  std::string frac = std::to_string(h % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(h / 100) + "." + frac + "%";
}

Metrics metrics(std::size_t correct, std::size_t generated, std::size_t total) {
  if (correct > generated || generated > total)
    throw Error(ErrorCode::kCountOrderViolation,
                "expected correct <= generated <= total, got " + std::to_string(correct) + ", " +
                    std::to_string(generated) + ", " + std::to_string(total));
  Metrics m;
  if (generated > 0) {
    m.precision = 100.0 * double(correct) / double(generated);
    m.precision_text = format_percent(correct, generated);
  } else {
    m.precision_text = "null";
  }
  if (total > 0) {
    m.recall = 100.0 * double(correct) / double(total);
    m.recall_text = format_percent(correct, total);
  } else {
    m.recall_text = "0.00%";
  }
  return m;
}

EvalReport run_eval(const std::vector<DatasetCase> &cases, const Pipeline &pipeline) {
  EvalReport r;
  const Chooser chooser = batch_chooser();
  const PrefixMap &ctx = pipeline.output_prefixes();
  for (const auto &c : cases) {
    CaseResult res;
    res.id = c.id;
    res.category = c.category;
    res.expected_untranslatable = !c.gold_sparql;
    TranslationTrace t = pipeline.translate(c.question, c.tree, chooser);
    res.generated = t.ok;
    if (t.ok) {
      res.sparql = t.sparql;
      if (c.gold_sparql) {
        res.correct = canonicalize(t.sparql, ctx) == canonicalize(*c.gold_sparql, ctx);
        if (!res.correct) {
          res.stage = "mismatch";
          res.reason = "generated query differs from gold";
        }
      } else {
        res.stage = "mismatch";
        res.reason = "generated a query for an untranslatable case";
      }
    } else {
      res.stage = t.failure_stage;
      res.reason = t.failure_code + ": " + t.failure_reason;
    }
    r.cases.push_back(std::move(res));
  }
  std::sort(r.cases.begin(), r.cases.end(),
            [](const CaseResult &a, const CaseResult &b) { return a.id < b.id; });

  for (const auto &c : r.cases) {
    ++r.total;
    r.generated += c.generated;
    r.correct += c.correct;
    if (c.expected_untranslatable) {
      ++r.expected_untranslatable;
      r.correctly_untranslated += !c.generated;
    } else {
      ++r.supported_total;
    }
    if (!c.correct && !(c.expected_untranslatable && !c.generated)) r.failures.push_back(c);
  }
  r.scores = metrics(r.correct, r.generated, r.total);
  r.supported_recall = r.supported_total ? 100.0 * double(r.correct) / double(r.supported_total) : 0;
  return r;
}

std::string EvalReport::to_json(int indent) const {
  ordered_json j;
  j["total"] = total;
  j["generated"] = generated;
  j["correct"] = correct;
  j["precision"] = scores.precision ? ordered_json(*scores.precision) : ordered_json(nullptr);
  j["recall"] = scores.recall;
  j["precision_text"] = scores.precision_text;
  j["recall_text"] = scores.recall_text;
  j["supported_total"] = supported_total;
  j["supported_recall"] = supported_recall;
  j["expected_untranslatable"] = expected_untranslatable;
  j["correctly_untranslated"] = correctly_untranslated;
  j["cases"] = ordered_json::array();
  for (const auto &c : cases) {
    j["cases"].push_back({{"id", c.id},
                          {"category", c.category},
                          {"generated", c.generated},
                          {"correct", c.correct},
                          {"expected_untranslatable", c.expected_untranslatable},
                          {"stage", c.stage.empty() ? ordered_json(nullptr) : ordered_json(c.stage)},
                          {"reason", c.reason.empty() ? ordered_json(nullptr) : ordered_json(c.reason)}});
  }
  j["failures"] = ordered_json::array();
  for (const auto &c : failures)
    j["failures"].push_back({{"id", c.id}, {"stage", c.stage}, {"reason", c.reason}});
  return j.dump(indent);
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "id                          category                  result\n";
  for (const auto &c : cases) {
    std::string result = c.correct ? "correct"
                         : c.generated ? "incorrect"
                         : c.expected_untranslatable ? "untranslated (expected)"
                                                     : "not translated: " + c.stage;
    std::string id = c.id, cat = c.category;
    id.resize(std::max<std::size_t>(id.size(), 28), ' ');
    cat.resize(std::max<std::size_t>(cat.size(), 26), ' ');
    out << id << cat << result << "\n";
  }
  out << "\n";
  out << "total:      " << total << "\n";
  out << "generated:  " << generated << "\n";
  out << "correct:    " << correct << "\n";
  out << "precision:  " << scores.precision_text << "\n";
  out << "recall:     " << scores.recall_text << "\n";
  out << "supported-subset recall: "
      << (supported_total ? format_percent(correct, supported_total) : std::string("n/a")) << " ("
      << correct << "/" << supported_total << ")\n";
  out << "correctly untranslated:  " << correctly_untranslated << "/" << expected_untranslatable
      << "\n";
  for (const auto &f : failures) out << "failure " << f.id << " [" << f.stage << "] " << f.reason << "\n";
  return out.str();
}

}  // namespace arsparql
