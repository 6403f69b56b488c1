#pragma once

#include <stdexcept>
#include <string>

namespace netcox {

/// Base class for all netcox domain errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Network construction / topology
struct DisconnectedNetwork : Error { using Error::Error; };
struct SegmentOverlap : Error { using Error::Error; };
struct ZeroLengthSegment : Error { using Error::Error; };
struct InvalidSegment : Error { using Error::Error; };
struct OffsetOutOfRange : Error { using Error::Error; };
struct NotATree : Error { using Error::Error; };

// Metrics
struct SingularMatrix : Error { using Error::Error; };
struct UndefinedAtKink : Error { using Error::Error; };
struct RadiusBeyondNetwork : Error { using Error::Error; };

// Covariance
struct InvalidParameters : Error { using Error::Error; };
struct NotPositiveSemidefinite : Error { using Error::Error; };

// Models / inference
struct InvalidModel : Error { using Error::Error; };
struct EmptyPattern : Error { using Error::Error; };
struct BandwidthNonpositive : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct OptimizerFailed : Error { using Error::Error; };

// I/O
struct ParseError : Error { using Error::Error; };
struct FileError : Error { using Error::Error; };

}  // namespace netcox
