#ifndef RELAXPLAN_ERROR_HPP
#define RELAXPLAN_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relaxplan {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NotARun : public Error {
public:
  using Error::Error;
};

class NotAPath : public Error {
public:
  using Error::Error;
};

class NotAccepted : public Error {
public:
  using Error::Error;
};

class UnknownProposition : public Error {
public:
  using Error::Error;
};

class InvalidModel : public Error {
public:
  using Error::Error;
};

/// Parse failure carrying a 1-based source position.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : SyntaxError(std::string(), what, line, column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

  /// The same error, prefixed with the file it came from.
  SyntaxError in_source(const std::string& source) const { return SyntaxError(source + ":", message_, line_, column_); }

private:
  SyntaxError(const std::string& prefix, const std::string& what, std::size_t line, std::size_t column)
      : Error(prefix + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line), column_(column), message_(what) {}

  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

class CostError : public SyntaxError {
public:
  using SyntaxError::SyntaxError;
};

class FragmentError : public Error {
public:
  using Error::Error;
};

class AlphabetError : public Error {
public:
  using Error::Error;
};

class NegativeWeight : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class BudgetExceeded : public Error {
public:
  using Error::Error;
};

}  // namespace relaxplan

#endif  // RELAXPLAN_ERROR_HPP
