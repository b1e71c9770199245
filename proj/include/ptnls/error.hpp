#pragma once

#include <stdexcept>
#include <string>

namespace ptnls {

enum class ErrorKind {
    BrokenPhase,
    RegimeViolation,
    NotManakov,
    GridTooCoarse,
    SolverDiverged,
    ConfigInvalid,
    ParseError,
    ValidationError,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ptnls
