#include "tcur/error.hpp"

namespace tcur {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimMismatch: return "DimMismatch";
        case ErrorKind::ZeroReference: return "ZeroReference";
        case ErrorKind::ZeroTensor: return "ZeroTensor";
        case ErrorKind::ResidualImaginary: return "ResidualImaginary";
        case ErrorKind::RankOutOfRange: return "RankOutOfRange";
        case ErrorKind::DivergenceDetected: return "DivergenceDetected";
        case ErrorKind::CorruptCheckpoint: return "CorruptCheckpoint";
        case ErrorKind::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorKind::IoFailure: return "IoFailure";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace tcur
