#pragma once

#include <stdexcept>
#include <string>

namespace oarc {

/// Malformed input data: out-of-range scores, bad indices, mixed score kinds.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid procedure or experiment parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or to bracket a root.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oarc
