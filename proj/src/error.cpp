#include "statz/error.hpp"

namespace statz {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse: return "parse_error";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::schema: return "schema_error";
    case ErrorCode::unknown_column: return "unknown_column";
    case ErrorCode::invalid_input: return "invalid_input";
    case ErrorCode::too_few_observations: return "too_few_observations";
    case ErrorCode::unsupported_size: return "unsupported_size";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::unknown_method: return "unknown_method";
    case ErrorCode::incomplete: return "incomplete";
    case ErrorCode::not_found: return "not_found";
  }
  return "error";
}

namespace {

std::string unknown_column_message(const std::string& name,
                                   const std::vector<std::string>& suggestions) {
  std::string msg = "no column named '" + name + "'";
  if (!suggestions.empty()) {
    msg += "; did you mean ";
    for (std::size_t i = 0; i < suggestions.size(); ++i) {
      if (i > 0) msg += i + 1 == suggestions.size() ? " or " : ", ";
      msg += "'" + suggestions[i] + "'";
    }
    msg += "?";
  }
  return msg;
}

}  // namespace

UnknownColumn::UnknownColumn(std::string name, std::vector<std::string> suggestions)
    : Error(ErrorCode::unknown_column, unknown_column_message(name, suggestions)),
      name_(std::move(name)),
      suggestions_(std::move(suggestions)) {}

TooFewObservations::TooFewObservations(std::size_t minimum, std::size_t got,
                                       const std::string& context)
    : Error(ErrorCode::too_few_observations,
            context + " needs at least " + std::to_string(minimum) + " observations, got " +
                std::to_string(got)),
      minimum_(minimum) {}

}  // namespace statz
