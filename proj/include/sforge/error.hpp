#pragma once

#include <stdexcept>
#include <string>

namespace sforge {

// Malformed input: bad JSON, unknown ids, wrong flags. CLI exit code 2.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input for which the mathematics fails. CLI exit code 1.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sforge
