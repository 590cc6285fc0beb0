#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iotsql {

// Every failure mode a caller may want to branch on.
enum class Errc {
  // store
  kDuplicateTable,
  kDuplicateColumn,
  kEmptySchema,
  kUnknownTable,
  kArityMismatch,
  kTypeMismatch,
  kParseError,
  kUnknownIdentifier,
  kTimeout,
  // ingest
  kMissingFieldsHeader,
  kFieldCountMismatch,
  kUnknownKind,
  kUnknownLabel,
  kBadTimestamp,
  kBadValue,
  kInvalidSpec,
  // templates
  kUnsatisfiableSlot,
  kExhaustedResampling,
  kUnboundPlaceholder,
  // splitter
  kBadRatios,
  kInsufficientBenign,
  kEmptyAttackClass,
  // modelio
  kEmptyQuestion,
  kDuplicateId,
  kMissingId,
  // eval
  kGoldExecutionError,
  kMissingPrediction,
  kUnknownId,
  kLengthMismatch,
  kEmpty,
  // baselines
  kSingleClass,
  kDimensionMismatch,
  // plumbing
  kIo,
  kConfig,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace iotsql
