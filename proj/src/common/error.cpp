#include "iotsql/common/error.hpp"

namespace iotsql {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kDuplicateTable: return "DuplicateTable";
    case Errc::kDuplicateColumn: return "DuplicateColumn";
    case Errc::kEmptySchema: return "EmptySchema";
    case Errc::kUnknownTable: return "UnknownTable";
    case Errc::kArityMismatch: return "ArityMismatch";
    case Errc::kTypeMismatch: return "TypeMismatch";
    case Errc::kParseError: return "ParseError";
    case Errc::kUnknownIdentifier: return "UnknownIdentifier";
    case Errc::kTimeout: return "Timeout";
    case Errc::kMissingFieldsHeader: return "MissingFieldsHeader";
    case Errc::kFieldCountMismatch: return "FieldCountMismatch";
    case Errc::kUnknownKind: return "UnknownKind";
    case Errc::kUnknownLabel: return "UnknownLabel";
    case Errc::kBadTimestamp: return "BadTimestamp";
    case Errc::kBadValue: return "BadValue";
    case Errc::kInvalidSpec: return "InvalidSpec";
    case Errc::kUnsatisfiableSlot: return "UnsatisfiableSlot";
    case Errc::kExhaustedResampling: return "ExhaustedResampling";
    case Errc::kUnboundPlaceholder: return "UnboundPlaceholder";
    case Errc::kBadRatios: return "BadRatios";
    case Errc::kInsufficientBenign: return "InsufficientBenign";
    case Errc::kEmptyAttackClass: return "EmptyAttackClass";
    case Errc::kEmptyQuestion: return "EmptyQuestion";
    case Errc::kDuplicateId: return "DuplicateId";
    case Errc::kMissingId: return "MissingId";
    case Errc::kGoldExecutionError: return "GoldExecutionError";
    case Errc::kMissingPrediction: return "MissingPrediction";
    case Errc::kUnknownId: return "UnknownId";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kEmpty: return "Empty";
    case Errc::kSingleClass: return "SingleClass";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kIo: return "Io";
    case Errc::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace iotsql
