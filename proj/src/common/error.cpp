#include "scholarscope/error.hpp"

namespace scholarscope {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUndecodableBytes: return "UndecodableBytes";
    case ErrorCode::kNoHeaderRow: return "NoHeaderRow";
    case ErrorCode::kMappingRejected: return "MappingRejected";
    case ErrorCode::kMissingMandatoryField: return "MissingMandatoryField";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kMalformedScimagoFile: return "MalformedScimagoFile";
    case ErrorCode::kMissingQuartileIndex: return "MissingQuartileIndex";
    case ErrorCode::kNoSuchComponent: return "NoSuchComponent";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kPartitionMismatch: return "PartitionMismatch";
    case ErrorCode::kNoDatedRecords: return "NoDatedRecords";
    case ErrorCode::kTooFewDocuments: return "TooFewDocuments";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kKExceedsDocuments: return "KExceedsDocuments";
    case ErrorCode::kIncompatibleChartType: return "IncompatibleChartType";
    case ErrorCode::kInvalidOptions: return "InvalidOptions";
  }
  return "Unknown";
}

}  // namespace scholarscope
