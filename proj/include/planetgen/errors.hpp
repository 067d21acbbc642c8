#pragma once

#include <stdexcept>
#include <string>

namespace planetgen {

/// Input outside an operation's mathematical domain (non-finite point,
/// non-unit direction, out-of-range parameter value).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Configuration rejected by validation. The message names the first
/// violated invariant, e.g. "octaves ≥ 1".
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A structural invariant does not hold (malformed quadtree, displacement
/// below the ocean floor handed to the biome classifier, ...).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace planetgen
