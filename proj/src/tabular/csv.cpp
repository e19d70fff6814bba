#include "statz/tabular/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "statz/error.hpp"

namespace statz::tabular {

namespace {

struct Field {
  std::string text;
  bool quoted = false;
};

using Record = std::vector<Field>;

// Returns the byte offset of the first invalid sequence, or npos.
std::size_t invalid_utf8_offset(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

/// RFC 4180 record reader. Tracks physical lines for error messages.
class Reader {
 public:
  Reader(std::string_view text, char delimiter) : s_(text), delim_(delimiter) {}

  bool done() const { return pos_ >= s_.size(); }
  std::size_t line() const { return line_; }

  Record next(std::size_t row) {
    Record record;
    Field field;
    const std::size_t start_line = line_;
    bool at_field_start = true;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (at_field_start && c == '"') {
        field.quoted = true;
        ++pos_;
        read_quoted(field, row, start_line);
        at_field_start = false;
        continue;
      }
      if (c == delim_) {
        record.push_back(std::move(field));
        field = Field{};
        at_field_start = true;
        ++pos_;
        continue;
      }
      if (c == '\r' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '\n') {
        pos_ += 2;
        ++line_;
        record.push_back(std::move(field));
        return record;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        record.push_back(std::move(field));
        return record;
      }
      if (field.quoted) {
        throw ParseError(row, start_line,
                         "line " + std::to_string(line_) + ": unexpected character after closing quote");
      }
      field.text.push_back(c);
      at_field_start = false;
      ++pos_;
    }
    record.push_back(std::move(field));
    return record;
  }

 private:
  void read_quoted(Field& field, std::size_t row, std::size_t start_line) {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '"') {
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '"') {
          field.text.push_back('"');
          pos_ += 2;
          continue;
        }
        ++pos_;
        return;
      }
      if (c == '\n') ++line_;
      field.text.push_back(c);
      ++pos_;
    }
    throw ParseError(row, start_line,
                     "line " + std::to_string(start_line) + ": unterminated quoted field");
  }

  std::string_view s_;
  char delim_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool is_blank_record(const Record& r) {
  return r.size() == 1 && !r[0].quoted && r[0].text.empty();
}

Column infer_column(std::string name, const std::vector<const Field*>& cells,
                    const CsvOptions& options) {
  const std::size_t n = cells.size();
  std::vector<bool> missing(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    missing[i] = !cells[i]->quoted && options.missing_tokens.contains(cells[i]->text);
  }

  std::vector<double> numbers(n, 0.0);
  bool numeric = true;
  for (std::size_t i = 0; i < n && numeric; ++i) {
    if (!missing[i]) numeric = parse_number(cells[i]->text, numbers[i]);
  }
  if (numeric) return Column::numeric(std::move(name), std::move(numbers), std::move(missing));

  std::vector<std::string> labels(n);
  std::unordered_set<std::string_view> distinct;
  for (std::size_t i = 0; i < n; ++i) {
    if (missing[i]) continue;
    labels[i] = cells[i]->text;
    distinct.insert(cells[i]->text);
  }
  if (distinct.size() <= options.categorical_max_distinct) {
    return Column::categorical(std::move(name), std::move(labels), std::move(missing));
  }
  return Column::text(std::move(name), std::move(labels), std::move(missing));
}

bool needs_quotes(std::string_view s, char delimiter) {
  for (char c : s)
    if (c == delimiter || c == '"' || c == '\n' || c == '\r') return true;
  return !s.empty() && (s.front() == ' ' || s.back() == ' ');
}

void append_field(std::string& out, std::string_view s, char delimiter, bool force_quotes) {
  if (!force_quotes && !needs_quotes(s, delimiter)) {
    out.append(s);
    return;
  }
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

Dataset import_csv(std::string_view bytes, const CsvOptions& options) {
  if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (auto bad = invalid_utf8_offset(bytes); bad != std::string_view::npos) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < bad; ++i) line += bytes[i] == '\n' ? 1 : 0;
    throw ParseError(0, line, "line " + std::to_string(line) + ": input is not valid UTF-8");
  }
  if (bytes.empty()) throw EmptyInput("input is empty");

  Reader reader(bytes, options.delimiter);
  std::vector<Record> records;
  std::vector<std::size_t> record_lines;
  while (!reader.done()) {
    auto line = reader.line();
    records.push_back(reader.next(records.size()));
    record_lines.push_back(line);
  }
  // A trailing line terminator does not start a record.
  while (!records.empty() && is_blank_record(records.back())) {
    records.pop_back();
    record_lines.pop_back();
  }
  if (records.empty()) throw EmptyInput("input has no rows");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  if (options.header_row) {
    for (auto& f : records.front()) names.push_back(f.text);
    first_data = 1;
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
      if (n.empty()) throw SchemaError("header contains an empty column name");
      if (!seen.insert(n).second) throw SchemaError("duplicate column name '" + n + "' in header");
    }
  } else {
    for (std::size_t i = 0; i < records.front().size(); ++i)
      names.push_back("column_" + std::to_string(i + 1));
  }
  if (records.size() <= first_data) throw EmptyInput("input has a header but no data rows");

  const std::size_t width = names.size();
  std::vector<std::vector<const Field*>> cells(width);
  for (std::size_t r = first_data; r < records.size(); ++r) {
    const std::size_t row = r - first_data;
    if (records[r].size() != width) {
      throw ParseError(row, record_lines[r],
                       "row " + std::to_string(row + 1) + " (line " + std::to_string(record_lines[r]) +
                           ") has " + std::to_string(records[r].size()) + " fields, expected " +
                           std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) cells[c].push_back(&records[r][c]);
  }

  std::vector<Column> columns;
  columns.reserve(width);
  for (std::size_t c = 0; c < width; ++c) columns.push_back(infer_column(names[c], cells[c], options));
  return Dataset(std::move(columns));
}

std::string format_number(double value) {
  if (std::isfinite(value) && value == std::trunc(value) && std::fabs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

std::string export_csv(const Dataset& d, char delimiter) {
  static const CsvOptions defaults;
  std::string out;
  for (std::size_t c = 0; c < d.cols(); ++c) {
    if (c > 0) out.push_back(delimiter);
    append_field(out, d.columns()[c].name(), delimiter, false);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) {
      if (c > 0) out.push_back(delimiter);
      const auto& col = d.columns()[c];
      if (col.is_missing(r)) continue;
      if (col.is_numeric()) {
        out += format_number(col.number(r));
      } else {
        const auto& s = col.label(r);
        append_field(out, s, delimiter, defaults.missing_tokens.contains(s));
      }
    }
    out.push_back('\n');
  }
  return out;
}

Dataset read_csv_file(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return import_csv(bytes, options);
}

void write_csv_file(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
  out << export_csv(d);
}

}  // namespace statz::tabular
