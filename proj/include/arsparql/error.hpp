#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arsparql {

enum class ErrorCode {
  // ptree
  kEmptyInput,
  kUnbalancedBrackets,
  kLeafWithoutToken,
  kMalformedTree,
  kNodeNotInTree,
  kDominanceViolation,
  // npx
  kNoNounPhrases,
  kNoHeadFound,
  // ontostore
  kSyntaxError,
  // mapper
  kTooManyMissing,
  kNoValidTriple,
  // sparqlgen
  kNoTargetFound,
  kTargetUnmatched,
  kEmptyBranch,
  kOutOfSubset,
  kContractViolation,
  kUnsupportedModifier,
  // eval
  kSchemaError,
  kCountOrderViolation,
  // config / io
  kConfigError,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported through this type. `position` carries a
// byte offset, a line number or a case index depending on the code; -1 when
// not applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, long position = -1)
      : std::runtime_error(message), code_(code), position_(position) {}

  ErrorCode code() const { return code_; }
  long position() const { return position_; }

 private:
  ErrorCode code_;
  long position_;
};

}  // namespace arsparql
