#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace statz {

enum class ErrorCode {
  parse,
  empty_input,
  schema,
  unknown_column,
  invalid_input,
  too_few_observations,
  unsupported_size,
  degenerate_input,
  unknown_method,
  incomplete,
  not_found,
};

/// Stable snake_case identifier, used in JSON error bodies.
const char* to_string(ErrorCode code) noexcept;

/// Base of every error raised by the statz libraries.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  /// `row` is the 0-based data row; `line` the 1-based physical line.
  ParseError(std::size_t row, std::size_t line, const std::string& what)
      : Error(ErrorCode::parse, what), row_(row), line_(line) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t row_;
  std::size_t line_;
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& what) : Error(ErrorCode::empty_input, what) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorCode::schema, what) {}
};

class UnknownColumn : public Error {
 public:
  UnknownColumn(std::string name, std::vector<std::string> suggestions);
  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

 private:
  std::string name_;
  std::vector<std::string> suggestions_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorCode::invalid_input, what) {}
};

class TooFewObservations : public Error {
 public:
  TooFewObservations(std::size_t minimum, std::size_t got, const std::string& context);
  std::size_t minimum() const noexcept { return minimum_; }

 private:
  std::size_t minimum_;
};

class UnsupportedSize : public Error {
 public:
  explicit UnsupportedSize(const std::string& what) : Error(ErrorCode::unsupported_size, what) {}
};

class DegenerateInput : public Error {
 public:
  explicit DegenerateInput(const std::string& what) : Error(ErrorCode::degenerate_input, what) {}
};

class UnknownMethod : public Error {
 public:
  explicit UnknownMethod(const std::string& id)
      : Error(ErrorCode::unknown_method, "unknown method '" + id + "'"), id_(id) {}
  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

/// The request cannot be answered yet; `question` says what is missing.
class Incomplete : public Error {
 public:
  explicit Incomplete(const std::string& question)
      : Error(ErrorCode::incomplete, question), question_(question) {}
  const std::string& question() const noexcept { return question_; }

 private:
  std::string question_;
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& what) : Error(ErrorCode::not_found, what) {}
};

}  // namespace statz
