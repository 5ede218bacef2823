#pragma once

#include <stdexcept>
#include <string>

namespace monorel {

/// Machine-readable reasons an operation can refuse its input or fail.
enum class ErrorCode {
    DimensionMismatch,
    NonSymmetricMatrix,
    NotConvexOnDomain,
    EmptyDomain,
    NotProper,
    InnerNotConcave,
    MinusInfinity,
    NotMonotone,
    NotSymmetric,
    NotMaximal,
    PointOutsideDomain,
    InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DimensionMismatch:  return "DimensionMismatch";
        case ErrorCode::NonSymmetricMatrix: return "NonSymmetricMatrix";
        case ErrorCode::NotConvexOnDomain:  return "NotConvexOnDomain";
        case ErrorCode::EmptyDomain:        return "EmptyDomain";
        case ErrorCode::NotProper:          return "NotProper";
        case ErrorCode::InnerNotConcave:    return "InnerNotConcave";
        case ErrorCode::MinusInfinity:      return "MinusInfinity";
        case ErrorCode::NotMonotone:        return "NotMonotone";
        case ErrorCode::NotSymmetric:       return "NotSymmetric";
        case ErrorCode::NotMaximal:         return "NotMaximal";
        case ErrorCode::PointOutsideDomain: return "PointOutsideDomain";
        case ErrorCode::InvalidArgument:    return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace monorel
