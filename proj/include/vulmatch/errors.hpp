#pragma once

#include <stdexcept>
#include <string>

namespace vulmatch {

enum class ErrorCode {
    NameNotFound,
    AmbiguousDefinition,
    SpanOutOfRange,
    ScriptMismatch,
    SchemaError,
    ValidationError,
    SchemaVersionMismatch,
    IoError,
    NoMappedInstructions,
    NoLeadingBlock,
    NoCounterpart,
    SignatureEmpty,
    UnknownCve,
    MissingSignatures,
    UsageError,
};

const char* error_code_name(ErrorCode code);

// All library failures surface as Error with a typed code; the CLI maps
// them to exit status 2 (user input) and everything else to 1.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

} // namespace vulmatch
