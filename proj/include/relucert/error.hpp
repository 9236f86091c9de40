#pragma once

#include <stdexcept>
#include <string>

namespace relucert {

enum class ErrorCode {
    DimensionMismatch,
    CoverPrecondViolated,
    NotPointed,
    CapExceeded,
    ParseError,
    EmptyDomain,
    DependentBasis,
    InvalidArgument,
    ProofViolation,
};

inline const char* error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CoverPrecondViolated: return "CoverPrecondViolated";
    case ErrorCode::NotPointed: return "NotPointed";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ProofViolation: return "ProofViolation";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column)
    {
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace relucert
