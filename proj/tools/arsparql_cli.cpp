// arsparql-cli: translate / repl / eval / dict front end over the C API.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 translation failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arsparql/arsparql.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;

struct Options {
  std::string ontology, synonyms, stopwords, stems, qwords, owords, prefixes;
  std::string languages = "ar,";
  std::string parser;
};

struct CString {
  char *p = nullptr;
  ~CString() { arsparql_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using PipelinePtr = std::unique_ptr<arsparql_pipeline, decltype(&arsparql_pipeline_close)>;
using ResultPtr = std::unique_ptr<arsparql_result, decltype(&arsparql_result_free)>;

bool read_text(const std::string &path, std::string &out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

const char *or_null(const std::string &s) { return s.empty() ? nullptr : s.c_str(); }

PipelinePtr open_pipeline(const Options &o) {
  arsparql_config cfg{};
  cfg.ontology_path = o.ontology.c_str();
  cfg.synonyms_path = or_null(o.synonyms);
  cfg.stopwords_path = or_null(o.stopwords);
  cfg.stems_path = or_null(o.stems);
  cfg.question_words_path = or_null(o.qwords);
  cfg.order_words_path = or_null(o.owords);
  cfg.prefixes_path = or_null(o.prefixes);
  cfg.languages = o.languages.c_str();
  arsparql_pipeline *p = nullptr;
  if (arsparql_pipeline_open(&cfg, &p) != ARSPARQL_OK) {
    std::cerr << "error: " << arsparql_last_error() << "\n";
    return {nullptr, arsparql_pipeline_close};
  }
  return {p, arsparql_pipeline_close};
}

// Interactive disambiguation: numbered readings, 1-based answer, three
// reprompts before giving up on the question.
struct Prompt {
  std::istream *in;
  std::ostream *out;
};

int interactive_choose(void *user, const char *, const char *intermediate,
                       const char *const *options, size_t n) {
  auto *p = static_cast<Prompt *>(user);
  std::ostream &out = *p->out;
  out << "Several ontology statements match " << intermediate << ":\n";
  for (size_t i = 0; i < n; ++i) out << "  " << (i + 1) << ") " << options[i] << "\n";
  for (int attempt = 0; attempt <= 3; ++attempt) {
    out << "choose [1-" << n << "]: " << std::flush;
    std::string line;
    if (!std::getline(*p->in, line)) {
      out << "\n";
      return -1;
    }
    try {
      std::size_t used = 0;
      long v = std::stol(line, &used);
      if (line.find_first_not_of(" \t\r", used) == std::string::npos && v >= 1 &&
          static_cast<size_t>(v) <= n)
        return static_cast<int>(v - 1);
    } catch (const std::exception &) {
    }
    out << "invalid selection '" << line << "'\n";
  }
  out << "no valid selection, skipping this question\n";
  return -1;
}

bool resolve_tree(const Options &o, const std::string &question, const std::string &tree_arg,
                  std::string &tree) {
  if (!tree_arg.empty()) {
    if (tree_arg.front() == '(') {
      tree = tree_arg;
      return true;
    }
    if (!read_text(tree_arg, tree)) {
      std::cerr << "error: cannot read tree file '" << tree_arg << "'\n";
      return false;
    }
    return true;
  }
  if (o.parser.empty()) {
    std::cerr << "error: a parse tree is required (--tree FILE or --parser CMD)\n";
    return false;
  }
  CString out;
  if (arsparql_parse_external(o.parser.c_str(), question.c_str(), &out.p) != ARSPARQL_OK) {
    std::cerr << "error: " << arsparql_last_error() << "\n";
    return false;
  }
  tree = out.str();
  return true;
}

int cmd_translate(const Options &o, const std::string &question, const std::string &tree_arg,
                  const std::string &trace_path, const std::string &chooser, bool quiet) {
  if (question.find_first_not_of(" \t\r\n") == std::string::npos) {
    std::cerr << "error: empty query\n";
    return kExitUsage;
  }
  std::string tree;
  if (!resolve_tree(o, question, tree_arg, tree)) return kExitUsage;
  PipelinePtr p = open_pipeline(o);
  if (!p) return kExitUsage;

  Prompt prompt{&std::cin, &std::cerr};
  arsparql_result *raw = nullptr;
  arsparql_status st =
      arsparql_translate(p.get(), question.c_str(), tree.c_str(),
                         chooser == "interactive" ? interactive_choose : nullptr, &prompt, &raw);
  if (!raw) {
    std::cerr << "error: " << arsparql_last_error() << "\n";
    return kExitUsage;
  }
  ResultPtr r(raw, arsparql_result_free);
  if (!quiet) std::cerr << arsparql_result_trace_text(r.get());
  if (!trace_path.empty()) {
    std::ofstream t(trace_path, std::ios::binary);
    if (!t) {
      std::cerr << "error: cannot write trace file '" << trace_path << "'\n";
      return kExitUsage;
    }
    t << arsparql_result_trace_json(r.get()) << "\n";
  }
  if (st != ARSPARQL_OK) {
    std::cerr << "translation failed (" << arsparql_result_failure_stage(r.get())
              << "): " << arsparql_result_failure_reason(r.get()) << "\n";
    return kExitFailed;
  }
  std::cout << arsparql_result_sparql(r.get()) << "\n";
  return kExitOk;
}

int cmd_repl(const Options &o, bool quiet) {
  PipelinePtr p = open_pipeline(o);
  if (!p) return kExitUsage;
  Prompt prompt{&std::cin, &std::cout};
  std::string question;
  while (true) {
    std::cout << "query> " << std::flush;
    if (!std::getline(std::cin, question)) break;
    if (question == "exit" || question == "quit") break;
    if (question.find_first_not_of(" \t\r") == std::string::npos) continue;

    std::string tree_arg;
    if (o.parser.empty()) {
      std::cout << "tree> " << std::flush;
      if (!std::getline(std::cin, tree_arg)) break;
    }
    std::string tree;
    if (!resolve_tree(o, question, tree_arg, tree)) continue;

    arsparql_result *raw = nullptr;
    arsparql_status st = arsparql_translate(p.get(), question.c_str(), tree.c_str(),
                                            interactive_choose, &prompt, &raw);
    if (!raw) {
      std::cout << "error: " << arsparql_last_error() << "\n";
      continue;
    }
    ResultPtr r(raw, arsparql_result_free);
    if (!quiet) std::cerr << arsparql_result_trace_text(r.get());
    if (st == ARSPARQL_OK) {
      std::cout << arsparql_result_sparql(r.get()) << "\n";
    } else {
      std::cout << "failed (" << arsparql_result_failure_stage(r.get())
                << "): " << arsparql_result_failure_reason(r.get()) << "\n";
    }
  }
  std::cout << "\n";
  return kExitOk;
}

int cmd_eval(const Options &o, const std::string &dataset_path, const std::string &json_path) {
  std::string dataset;
  if (!read_text(dataset_path, dataset)) {
    std::cerr << "error: cannot read dataset '" << dataset_path << "'\n";
    return kExitUsage;
  }
  PipelinePtr p = open_pipeline(o);
  if (!p) return kExitUsage;
  CString report_json, report_text;
  if (arsparql_eval(p.get(), dataset.c_str(), &report_json.p, &report_text.p) != ARSPARQL_OK) {
    std::cerr << "error: " << arsparql_last_error() << "\n";
    return kExitUsage;
  }
  std::cout << report_text.str();
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write report '" << json_path << "'\n";
      return kExitUsage;
    }
    out << report_json.str() << "\n";
  }
  return kExitOk;
}

int cmd_dict(const Options &o, const std::vector<std::string> &words) {
  PipelinePtr p = open_pipeline(o);
  if (!p) return kExitUsage;
  std::string phrase;
  for (const auto &w : words) phrase += (phrase.empty() ? "" : " ") + w;
  CString out;
  if (arsparql_dict_lookup(p.get(), phrase.c_str(), &out.p) != ARSPARQL_OK) {
    std::cerr << "error: " << arsparql_last_error() << "\n";
    return kExitUsage;
  }
  std::string text = out.str();
  std::cout << (text.empty() ? "no matches\n" : text);
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Translate Arabic questions into SPARQL over an ontology"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(arsparql_version()));
  app.set_config("--config", "", "TOML/INI file supplying option values")
      ->envname("NLQ_CONFIG");

  Options o;
  bool quiet = false;
  app.add_option("--ontology", o.ontology, "ontology in N-Triples with @prefix lines")
      ->check(CLI::ExistingFile);
  app.add_option("--synonyms", o.synonyms, "synonym lexicon (word<TAB>syn1,syn2)")
      ->check(CLI::ExistingFile);
  app.add_option("--stopwords", o.stopwords, "stop-word list, one per line")
      ->check(CLI::ExistingFile);
  app.add_option("--stems", o.stems, "light-stemming rules (prefix:/suffix:/min:)")
      ->check(CLI::ExistingFile);
  app.add_option("--qwords", o.qwords, "question words, one per line")->check(CLI::ExistingFile);
  app.add_option("--owords", o.owords, "order words, one per line")->check(CLI::ExistingFile);
  app.add_option("--prefixes", o.prefixes, "extra @prefix lines for emitted queries")
      ->check(CLI::ExistingFile);
  app.add_option("--lang", o.languages, "accepted label language tags, comma separated")
      ->capture_default_str();
  app.add_option("--parser", o.parser, "command printing a bracketed tree for the question on stdin");
  app.add_flag("-q,--quiet", quiet, "do not print the trace on stderr");

  std::string question, tree, trace, chooser = "batch";
  auto *translate = app.add_subcommand("translate", "translate one question")->fallthrough();
  translate->add_option("query", question, "Arabic question")->required();
  translate->add_option("--tree", tree, "bracketed parse tree file (or inline tree)");
  translate->add_option("--trace", trace, "write the JSON trace to this file");
  translate->add_option("--chooser", chooser, "ambiguity policy")
      ->check(CLI::IsMember({"batch", "interactive"}))
      ->capture_default_str();

  auto *repl = app.add_subcommand("repl", "interactive session with disambiguation prompts")
                   ->fallthrough();

  std::string dataset, report;
  auto *eval = app.add_subcommand("eval", "evaluate against a gold dataset")->fallthrough();
  eval->add_option("--dataset", dataset, "JSON array of gold cases")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--json", report, "write the machine-readable report here");

  std::vector<std::string> words;
  auto *dict = app.add_subcommand("dict", "look a word or phrase up in the dictionary")
                   ->fallthrough();
  dict->add_option("word", words, "word(s) to look up")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (o.ontology.empty()) {
    std::cerr << "error: --ontology is required\n";
    return kExitUsage;
  }

  if (*translate) return cmd_translate(o, question, tree, trace, chooser, quiet);
  if (*repl) return cmd_repl(o, quiet);
  if (*eval) return cmd_eval(o, dataset, report);
  if (*dict) return cmd_dict(o, words);
  return kExitUsage;
}
