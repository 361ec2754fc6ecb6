#pragma once

#include <stdexcept>
#include <string>

namespace ocat {

// Invalid parameters or inconsistent inputs. `field()` names the offending
// parameter when one can be identified.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  explicit ConfigError(const std::string& what) : ConfigError("", what) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Requested feature exists in the model space but is deliberately not
// supported (e.g. phase shifts on a linear box, p > 2 excitations).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Solver breakdown, invariant violation in a computed result, or a
// non-finite value where a finite one is required.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ocat
