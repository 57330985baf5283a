#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace cybergeo {

using CsvRow = std::vector<std::string>;

// RFC-4180 reader: quoted fields may hold delimiters, doubled quotes and
// line breaks. A leading UTF-8 byte-order mark is skipped; CRLF and LF line
// endings are both accepted.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in, char delimiter = ',');

  // Reads the next record. Returns false at end of input. Throws InputError
  // on an unterminated quoted field.
  bool next(CsvRow& row);

  // 1-based physical line on which the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

// Splits one line on tabs with no quoting (GeoNames dump convention).
std::vector<std::string_view> split_tabs(std::string_view line);

std::string csv_escape(std::string_view field, char delimiter = ',');

// Accumulates an RFC-4180 document in memory; rows end with '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(char delimiter = ',') : delimiter_(delimiter) {}

  void row(const std::vector<std::string>& fields);
  const std::string& str() const { return out_; }

 private:
  char delimiter_;
  std::string out_;
};

// Maps header names to column positions; throws InputError when a required
// column is missing.
class CsvHeader {
 public:
  explicit CsvHeader(const CsvRow& header);

  std::size_t require(std::string_view name) const;
  std::ptrdiff_t find(std::string_view name) const;  // -1 when absent

 private:
  CsvRow names_;
};

}  // namespace cybergeo
