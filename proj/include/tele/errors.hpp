#ifndef TELE_ERRORS_HPP_
#define TELE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tele {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model violates a structural invariant (cycle, missing mechanism, ...).
/// `node()` names the offending variable when there is one.
class StructuralError : public Error {
 public:
  StructuralError(std::string node, const std::string& what)
      : Error(what), node_(std::move(node)) {}
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

/// A level outside a variable's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

/// Intended effects that are not effects of the action, goals over
/// non-intended variables.
class TeleologicalValidityError : public Error {
 public:
  using Error::Error;
};

/// Two objects that cannot be compared (different base models).
class ComparisonError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  BudgetError(std::size_t required, std::size_t cap)
      : Error("goal-hypothesis enumeration needs " + std::to_string(required) +
              " candidates but the budget is " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}
  std::size_t required() const noexcept { return required_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t required_;
  std::size_t cap_;
};

/// A dataset whose columns do not match the model it is used with.
class BindingError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

/// No causal reduction exists (goal never achievable).
class ReductionError : public Error {
 public:
  using Error::Error;
};

/// Text input error. `line` and `column` are 1-based; column 0 means the
/// whole line.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(format(line, column, message)),
        line_(line),
        column_(column),
        message_(message) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(int line, int column, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  int line_;
  int column_;
  std::string message_;
};

}  // namespace tele

#endif  // TELE_ERRORS_HPP_
