#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rcons {

// Caller passed arguments outside an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Request is well-formed but exceeds a configured computational limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A broken engine invariant (scheduler bug). Never expected in a correct run.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario validation failure; carries every violated invariant, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& p : items) {
      if (!out.empty()) out += "; ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace rcons
