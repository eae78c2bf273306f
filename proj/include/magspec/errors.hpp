#pragma once

#include <stdexcept>
#include <string>

namespace magspec {

// Base of every error thrown by the library. The CLI maps these to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };
struct PoleError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct BracketError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct WindowExhausted : Error { using Error::Error; };
struct NoRootInBracket : Error { using Error::Error; };
struct GapViolation : Error { using Error::Error; };
struct NoPositiveRoot : Error { using Error::Error; };
struct FitWindowTooNoisy : Error { using Error::Error; };

} // namespace magspec
