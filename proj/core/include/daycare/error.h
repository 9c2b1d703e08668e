#ifndef DAYCARE_ERROR_H_
#define DAYCARE_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace daycare {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document. `path` is a JSON-pointer style location such as
// "/families/2/preferences/0/1"; `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::string message, int line = 0)
      : Error(Format(path, message, line)),
        path_(std::move(path)),
        detail_(std::move(message)),
        line_(line) {}

  const std::string& path() const { return path_; }
  const std::string& detail() const { return detail_; }
  int line() const { return line_; }

 private:
  static std::string Format(const std::string& path, const std::string& msg,
                            int line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!path.empty()) out += path + ": ";
    return out + msg;
  }

  std::string path_;
  std::string detail_;
  int line_;
};

// A matching that is not total or not consistent with family tuples.
class MatchingError : public Error {
 public:
  using Error::Error;
};

// Instance passed to an operation whose precondition it violates.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the configured limit.
class LimitExceeded : public Error {
 public:
  LimitExceeded(std::uint64_t size, std::uint64_t limit)
      : Error("enumeration size " + std::to_string(size) + " exceeds limit " +
              std::to_string(limit)),
        size_(size),
        limit_(limit) {}

  std::uint64_t size() const { return size_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t size_;
  std::uint64_t limit_;
};

// An assignment handed to the model evaluator breaks a hard constraint.
// `label` names the constraint family, e.g. "at-most-one" or "capacity".
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(std::string label, const std::string& message)
      : Error(label + ": " + message), label_(std::move(label)) {}

  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

// No feasible, individually rational matching satisfies the constraints.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// The time limit struck before any acceptable matching was found.
class TimeLimitReached : public Error {
 public:
  using Error::Error;
};

}  // namespace daycare

#endif  // DAYCARE_ERROR_H_
