#include "vulmatch/errors.hpp"

namespace vulmatch {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::NameNotFound: return "NameNotFound";
    case ErrorCode::AmbiguousDefinition: return "AmbiguousDefinition";
    case ErrorCode::SpanOutOfRange: return "SpanOutOfRange";
    case ErrorCode::ScriptMismatch: return "ScriptMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NoMappedInstructions: return "NoMappedInstructions";
    case ErrorCode::NoLeadingBlock: return "NoLeadingBlock";
    case ErrorCode::NoCounterpart: return "NoCounterpart";
    case ErrorCode::SignatureEmpty: return "SignatureEmpty";
    case ErrorCode::UnknownCve: return "UnknownCve";
    case ErrorCode::MissingSignatures: return "MissingSignatures";
    case ErrorCode::UsageError: return "UsageError";
    }
    return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace vulmatch
