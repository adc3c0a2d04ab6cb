#pragma once

#include <stdexcept>
#include <string>

namespace mcf {

// Exit codes of the CLI map onto these categories.
enum class ExitCode : int { ok = 0, verification = 2, numeric = 3, config = 4 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// iterate left the inflated simplex
struct MaxPrincipleError : NumericError {
    using NumericError::NumericError;
};

struct VerificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mcf
