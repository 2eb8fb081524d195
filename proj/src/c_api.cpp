#include "arsparql/arsparql.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <unistd.h>

#include "arsparql/eval.hpp"
#include "arsparql/pipeline.hpp"

struct arsparql_pipeline {
  arsparql::Pipeline impl;
};

struct arsparql_result {
  arsparql::TranslationTrace trace;
  std::string json, text;
  std::size_t chooser_calls = 0;
};

namespace {

thread_local std::string g_last_error;

arsparql_status to_status(arsparql::ErrorCode code) {
  using arsparql::ErrorCode;
  switch (code) {
    case ErrorCode::kIoError: return ARSPARQL_E_IO;
    case ErrorCode::kConfigError: return ARSPARQL_E_CONFIG;
    case ErrorCode::kSyntaxError:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kUnbalancedBrackets:
    case ErrorCode::kLeafWithoutToken:
    case ErrorCode::kMalformedTree: return ARSPARQL_E_SYNTAX;
    case ErrorCode::kSchemaError: return ARSPARQL_E_SCHEMA;
    case ErrorCode::kOutOfSubset: return ARSPARQL_E_OUT_OF_SUBSET;
    case ErrorCode::kCountOrderViolation: return ARSPARQL_E_COUNT_ORDER;
    default: return ARSPARQL_E_TRANSLATION;
  }
}

// Runs `fn`, mapping exceptions to status codes and the thread-local message.
template <typename F>
arsparql_status guarded(F &&fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const arsparql::Error &e) {
    g_last_error = std::string(arsparql::error_code_name(e.code())) + ": " + e.what();
    return to_status(e.code());
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return ARSPARQL_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ARSPARQL_E_INTERNAL;
  }
}

arsparql_status invalid(const char *what) {
  g_last_error = what;
  return ARSPARQL_E_INVALID_ARGUMENT;
}

char *dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string opt(const char *s) { return s ? s : ""; }

}  // namespace

extern "C" {

const char *arsparql_version(void) { return "0.1.0"; }

const char *arsparql_status_name(arsparql_status status) {
  switch (status) {
    case ARSPARQL_OK: return "OK";
    case ARSPARQL_E_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case ARSPARQL_E_IO: return "IO";
    case ARSPARQL_E_CONFIG: return "CONFIG";
    case ARSPARQL_E_SYNTAX: return "SYNTAX";
    case ARSPARQL_E_TRANSLATION: return "TRANSLATION";
    case ARSPARQL_E_SCHEMA: return "SCHEMA";
    case ARSPARQL_E_OUT_OF_SUBSET: return "OUT_OF_SUBSET";
    case ARSPARQL_E_COUNT_ORDER: return "COUNT_ORDER";
    case ARSPARQL_E_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char *arsparql_last_error(void) { return g_last_error.c_str(); }

void arsparql_string_free(char *s) { std::free(s); }

arsparql_status arsparql_pipeline_open(const arsparql_config *config, arsparql_pipeline **out) {
  if (!config || !out) return invalid("config and out must not be NULL");
  if (!config->ontology_path || !*config->ontology_path) return invalid("ontology_path is required");
  *out = nullptr;
  return guarded([&] {
    arsparql::PipelineConfig c;
    c.ontology_path = config->ontology_path;
    c.synonyms_path = opt(config->synonyms_path);
    c.stopwords_path = opt(config->stopwords_path);
    c.stems_path = opt(config->stems_path);
    c.question_words_path = opt(config->question_words_path);
    c.order_words_path = opt(config->order_words_path);
    c.prefixes_path = opt(config->prefixes_path);
    if (config->languages) {
      c.languages.clear();
      std::string langs = config->languages;
      std::size_t start = 0;
      while (true) {
        std::size_t comma = langs.find(',', start);
        std::string tag = langs.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
        c.languages.insert(tag);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    *out = new arsparql_pipeline{arsparql::Pipeline::load(c)};
    return ARSPARQL_OK;
  });
}

void arsparql_pipeline_close(arsparql_pipeline *pipeline) { delete pipeline; }

arsparql_status arsparql_translate(const arsparql_pipeline *pipeline, const char *question,
                                   const char *tree, arsparql_chooser_fn chooser, void *user,
                                   arsparql_result **out) {
  if (!pipeline || !question || !tree || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] {
    auto *result = new arsparql_result;
    arsparql::Chooser pick = arsparql::batch_chooser();
    if (chooser) {
      pick = [&, result](const arsparql::ChoiceContext &ctx,
                         const std::vector<arsparql::CandidateRdfTriple> &cands)
          -> std::optional<std::size_t> {
        ++result->chooser_calls;
        std::vector<std::string> labels;
        for (const auto &c : cands) labels.push_back(pipeline->impl.describe(c));
        std::vector<const char *> ptrs;
        for (const auto &l : labels) ptrs.push_back(l.c_str());
        int idx = chooser(user, ctx.question.c_str(), ctx.intermediate.c_str(), ptrs.data(),
                          ptrs.size());
        if (idx < 0) return std::nullopt;
        return static_cast<std::size_t>(idx);
      };
    } else {
      pick = [result, batch = arsparql::batch_chooser()](
                 const arsparql::ChoiceContext &ctx,
                 const std::vector<arsparql::CandidateRdfTriple> &cands) {
        ++result->chooser_calls;
        return batch(ctx, cands);
      };
    }
    try {
      result->trace = pipeline->impl.translate(question, std::string_view(tree), pick);
    } catch (...) {
      delete result;
      throw;
    }
    result->json = result->trace.to_json();
    result->text = result->trace.to_text();
    *out = result;
    if (!result->trace.ok) {
      g_last_error = result->trace.failure_code + ": " + result->trace.failure_reason;
      return ARSPARQL_E_TRANSLATION;
    }
    return ARSPARQL_OK;
  });
}

arsparql_status arsparql_parse_external(const char *parser_cmd, const char *question,
                                        char **tree_out) {
  if (!parser_cmd || !question || !tree_out) return invalid("NULL argument");
  *tree_out = nullptr;
  return guarded([&] {
    char path[] = "/tmp/arsparql-query-XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) throw arsparql::Error(arsparql::ErrorCode::kIoError, "cannot create temp file");
    const std::string q = std::string(question) + "\n";
    const bool wrote = write(fd, q.data(), q.size()) == static_cast<ssize_t>(q.size());
    close(fd);
    if (!wrote) {
      unlink(path);
      throw arsparql::Error(arsparql::ErrorCode::kIoError, "cannot write temp file");
    }
    const std::string cmd = std::string(parser_cmd) + " < '" + path + "'";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
      unlink(path);
      throw arsparql::Error(arsparql::ErrorCode::kIoError, "cannot run parser command");
    }
    std::string output;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    const int status = pclose(pipe);
    unlink(path);
    if (status != 0)
      throw arsparql::Error(arsparql::ErrorCode::kIoError,
                            "parser command exited with status " + std::to_string(status));
    *tree_out = dup(output);
    return ARSPARQL_OK;
  });
}

int arsparql_result_ok(const arsparql_result *r) { return r && r->trace.ok ? 1 : 0; }

const char *arsparql_result_sparql(const arsparql_result *r) {
  return r && r->trace.ok ? r->trace.sparql.c_str() : nullptr;
}
const char *arsparql_result_failure_stage(const arsparql_result *r) {
  return r ? r->trace.failure_stage.c_str() : nullptr;
}
const char *arsparql_result_failure_reason(const arsparql_result *r) {
  return r ? r->trace.failure_reason.c_str() : nullptr;
}
const char *arsparql_result_trace_json(const arsparql_result *r) {
  return r ? r->json.c_str() : nullptr;
}
const char *arsparql_result_trace_text(const arsparql_result *r) {
  return r ? r->text.c_str() : nullptr;
}
size_t arsparql_result_chooser_calls(const arsparql_result *r) { return r ? r->chooser_calls : 0; }

void arsparql_result_free(arsparql_result *r) { delete r; }

arsparql_status arsparql_dict_lookup(const arsparql_pipeline *pipeline, const char *phrase,
                                     char **out) {
  if (!pipeline || !phrase || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    for (const auto &m : pipeline->impl.dictionary().lookup(arsparql::split_whitespace(phrase))) {
      text += m.iri + " " + std::string(arsparql::term_kind_name(m.kind)) + " " +
              std::string(arsparql::match_tier_name(m.tier)) + "\n";
    }
    *out = dup(text);
    return ARSPARQL_OK;
  });
}

arsparql_status arsparql_canonicalize(const arsparql_pipeline *pipeline, const char *sparql,
                                      char **out) {
  if (!sparql || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] {
    const arsparql::PrefixMap none;
    *out = dup(arsparql::canonicalize(sparql, pipeline ? pipeline->impl.output_prefixes() : none));
    return ARSPARQL_OK;
  });
}

arsparql_status arsparql_eval(const arsparql_pipeline *pipeline, const char *dataset_json,
                              char **report_json, char **report_text) {
  if (!pipeline || !dataset_json) return invalid("NULL argument");
  if (report_json) *report_json = nullptr;
  if (report_text) *report_text = nullptr;
  return guarded([&] {
    auto report = arsparql::run_eval(arsparql::load_dataset(dataset_json), pipeline->impl);
    if (report_json) *report_json = dup(report.to_json());
    if (report_text) *report_text = dup(report.to_text());
    return ARSPARQL_OK;
  });
}

arsparql_status arsparql_metrics(size_t correct, size_t generated, size_t total,
                                 double *precision, int *precision_defined, double *recall) {
  if (!precision || !precision_defined || !recall) return invalid("NULL argument");
  return guarded([&] {
    auto m = arsparql::metrics(correct, generated, total);
    *precision_defined = m.precision.has_value() ? 1 : 0;
    *precision = m.precision.value_or(0.0);
    *recall = m.recall;
    return ARSPARQL_OK;
  });
}

}  // extern "C"
