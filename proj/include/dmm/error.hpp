#pragma once

#include <stdexcept>
#include <string>

namespace dmm {

// Raised when a theorem or lemma precondition is not met by the inputs
// (for example T < L for the extra-gradient step-size rule).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A malformed or inconsistent experiment configuration. `field()` names the
// offending key so the CLI can report it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace dmm
