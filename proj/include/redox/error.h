#pragma once

#include <stdexcept>
#include <string>

namespace redox {

// Bad parameters, unreadable config, divisibility violations.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A protocol invariant that must hold by construction was violated.
class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Filesystem / container format problems.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void check_failed(const std::string& what, const char* file, int line) {
  throw InvariantViolation("invariant violated: " + what + " (" + file + ":" +
                           std::to_string(line) + ")");
}
}  // namespace detail

}  // namespace redox

// Protocol assertions stay on in release builds; the simulator's correctness
// claims depend on them firing.
#define REDOX_CHECK(cond, msg)                                        \
  do {                                                                \
    if (!(cond)) ::redox::detail::check_failed((msg), __FILE__, __LINE__); \
  } while (0)
