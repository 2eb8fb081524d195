#include "arsparql/error.hpp"

namespace arsparql {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kUnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorCode::kLeafWithoutToken: return "LeafWithoutToken";
    case ErrorCode::kMalformedTree: return "MalformedTree";
    case ErrorCode::kNodeNotInTree: return "NodeNotInTree";
    case ErrorCode::kDominanceViolation: return "DominanceViolation";
    case ErrorCode::kNoNounPhrases: return "NoNounPhrases";
    case ErrorCode::kNoHeadFound: return "NoHeadFound";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kTooManyMissing: return "TooManyMissing";
    case ErrorCode::kNoValidTriple: return "NoValidTriple";
    case ErrorCode::kNoTargetFound: return "NoTargetFound";
    case ErrorCode::kTargetUnmatched: return "TargetUnmatched";
    case ErrorCode::kEmptyBranch: return "EmptyBranch";
    case ErrorCode::kOutOfSubset: return "OutOfSubset";
    case ErrorCode::kContractViolation: return "ContractViolation";
    case ErrorCode::kUnsupportedModifier: return "UnsupportedModifier";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kCountOrderViolation: return "CountOrderViolation";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace arsparql
