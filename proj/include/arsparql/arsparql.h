#ifndef ARSPARQL_H
#define ARSPARQL_H

/* C interface to the Arabic question -> SPARQL translator.
 * All strings are UTF-8. Strings returned through char** out-parameters are
 * owned by the caller and released with arsparql_string_free; strings
 * returned by accessor functions live as long as their handle. */

#include <stddef.h>

#if defined(_WIN32)
#define ARSPARQL_API __declspec(dllexport)
#else
#define ARSPARQL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum arsparql_status {
  ARSPARQL_OK = 0,
  ARSPARQL_E_INVALID_ARGUMENT = 1,
  ARSPARQL_E_IO = 2,
  ARSPARQL_E_CONFIG = 3,
  ARSPARQL_E_SYNTAX = 4,
  ARSPARQL_E_TRANSLATION = 5, /* result handle is still produced */
  ARSPARQL_E_SCHEMA = 6,
  ARSPARQL_E_OUT_OF_SUBSET = 7,
  ARSPARQL_E_COUNT_ORDER = 8,
  ARSPARQL_E_INTERNAL = 9
} arsparql_status;

typedef struct arsparql_pipeline arsparql_pipeline;
typedef struct arsparql_result arsparql_result;

typedef struct arsparql_config {
  const char *ontology_path; /* required */
  const char *synonyms_path;
  const char *stopwords_path;
  const char *stems_path;
  const char *question_words_path;
  const char *order_words_path;
  const char *prefixes_path;
  const char *languages; /* comma separated, "" entry = untagged; NULL = "ar," */
} arsparql_config;

/* Ambiguity callback: `options` holds n readable candidate statements.
 * Return a 0-based index, or -1 to abort the translation. */
typedef int (*arsparql_chooser_fn)(void *user, const char *question, const char *intermediate,
                                   const char *const *options, size_t n);

ARSPARQL_API const char *arsparql_version(void);
ARSPARQL_API const char *arsparql_status_name(arsparql_status status);
/* Message of the last failing call on this thread ("" if none). */
ARSPARQL_API const char *arsparql_last_error(void);
ARSPARQL_API void arsparql_string_free(char *s);

ARSPARQL_API arsparql_status arsparql_pipeline_open(const arsparql_config *config,
                                                    arsparql_pipeline **out);
ARSPARQL_API void arsparql_pipeline_close(arsparql_pipeline *pipeline);

/* chooser == NULL selects the batch policy (best score, ties abort). */
ARSPARQL_API arsparql_status arsparql_translate(const arsparql_pipeline *pipeline,
                                                const char *question, const char *tree,
                                                arsparql_chooser_fn chooser, void *user,
                                                arsparql_result **out);
/* Runs `parser_cmd` through the shell with the question on stdin and returns
 * its stdout (a bracketed tree). Non-zero exit status is ARSPARQL_E_IO. */
ARSPARQL_API arsparql_status arsparql_parse_external(const char *parser_cmd, const char *question,
                                                     char **tree_out);

ARSPARQL_API int arsparql_result_ok(const arsparql_result *r);
ARSPARQL_API const char *arsparql_result_sparql(const arsparql_result *r);
ARSPARQL_API const char *arsparql_result_failure_stage(const arsparql_result *r);
ARSPARQL_API const char *arsparql_result_failure_reason(const arsparql_result *r);
ARSPARQL_API const char *arsparql_result_trace_json(const arsparql_result *r);
ARSPARQL_API const char *arsparql_result_trace_text(const arsparql_result *r);
ARSPARQL_API size_t arsparql_result_chooser_calls(const arsparql_result *r);
ARSPARQL_API void arsparql_result_free(arsparql_result *r);

/* One line per match: "<iri> <KIND> <TIER>"; empty string when none. */
ARSPARQL_API arsparql_status arsparql_dict_lookup(const arsparql_pipeline *pipeline,
                                                  const char *phrase, char **out);

/* pipeline may be NULL; otherwise its prefixes resolve undeclared CURIEs. */
ARSPARQL_API arsparql_status arsparql_canonicalize(const arsparql_pipeline *pipeline,
                                                   const char *sparql, char **out);

ARSPARQL_API arsparql_status arsparql_eval(const arsparql_pipeline *pipeline,
                                           const char *dataset_json, char **report_json,
                                           char **report_text);

/* Percentages; *precision_defined is 0 when generated == 0. */
ARSPARQL_API arsparql_status arsparql_metrics(size_t correct, size_t generated, size_t total,
                                              double *precision, int *precision_defined,
                                              double *recall);

#ifdef __cplusplus
}
#endif

#endif /* ARSPARQL_H */
