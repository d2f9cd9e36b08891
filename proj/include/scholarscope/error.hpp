#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scholarscope {

enum class ErrorCode {
  kInvalidArgument,
  // ingest
  kUndecodableBytes,
  kNoHeaderRow,
  kMappingRejected,
  kMissingMandatoryField,
  kEmptyInput,
  // corpus
  kInvalidSpec,
  // bibtrail
  kMalformedScimagoFile,
  kMissingQuartileIndex,
  // colabrix
  kNoSuchComponent,
  kEmptyGraph,
  kDisconnectedGraph,
  kPartitionMismatch,
  // themantix
  kNoDatedRecords,
  kTooFewDocuments,
  kEmptyVocabulary,
  kKExceedsDocuments,
  // viz
  kIncompatibleChartType,
  kInvalidOptions,
};

std::string_view error_code_name(ErrorCode code);

// All module-level failures are reported with this exception type; the code
// lets the CLI and the HTTP layer map failures to exit codes / status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scholarscope
