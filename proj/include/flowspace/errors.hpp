#pragma once

#include <stdexcept>
#include <string>

namespace flowspace {

// Malformed or inconsistent input data (bad JSON, invalid compose table,
// labels outside the context, ...). Maps to exit code 2 at the CLI.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An operation was invoked outside its stated domain (generator not
// applicable, cyclic instance without a cap, ...). Exit code 3 at the CLI.
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flowspace
