#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcur {

enum class ErrorKind {
    DimMismatch,
    ZeroReference,
    ZeroTensor,
    ResidualImaginary,
    RankOutOfRange,
    DivergenceDetected,
    CorruptCheckpoint,
    UnsupportedVersion,
    IoFailure,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Library error. Every failure raised by tcur carries one of the kinds above.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace tcur
