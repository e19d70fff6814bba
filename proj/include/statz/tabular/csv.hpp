#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "statz/tabular/dataset.hpp"

namespace statz::tabular {

struct CsvOptions {
  char delimiter = ',';
  bool header_row = true;
  /// Unquoted cells equal to one of these are missing.
  std::set<std::string, std::less<>> missing_tokens{"", "NA", "NaN", "null"};
  /// Non-numeric columns with at most this many distinct values are categorical.
  std::size_t categorical_max_distinct = 20;
};

/// Parses RFC 4180 delimiter-separated text (UTF-8, LF or CRLF).
///
/// Column kinds are inferred: every non-missing cell parses as a finite number
/// -> numeric; otherwise at most `categorical_max_distinct` distinct values ->
/// categorical; otherwise text.
///
/// Throws EmptyInput when there is no data row, ParseError on ragged rows,
/// unterminated quotes or invalid UTF-8, SchemaError on bad header names.
Dataset import_csv(std::string_view bytes, const CsvOptions& options = {});

/// Writes RFC 4180 text with LF line endings. Missing cells become empty
/// fields; integral values are written without a fractional part and all
/// other numbers in shortest round-trip form.
std::string export_csv(const Dataset& d, char delimiter = ',');

Dataset read_csv_file(const std::filesystem::path& path, const CsvOptions& options = {});
void write_csv_file(const std::filesystem::path& path, const Dataset& d);

/// Shortest text that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace statz::tabular
