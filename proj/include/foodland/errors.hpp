#pragma once

#include <stdexcept>
#include <string>

namespace foodland {

// Configuration, flag or input-schema problems. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model-domain violations: invalid state, out-of-domain drivers, failed
// preconditions during a simulation. CLI exit code 3.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem and serialization problems. CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace foodland
