#pragma once

#include <stdexcept>
#include <string>

namespace ccpp {

/// Base error carrying the pipeline stage that raised it.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Bad input: out-of-range parameter, malformed file, violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File system problem: missing file, unreadable row, unwritable directory.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The planning problem has no solution under the given constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed (e.g. two counting routes disagree).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccpp
