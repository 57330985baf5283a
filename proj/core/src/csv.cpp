#include "cybergeo/csv.hpp"

#include "cybergeo/errors.hpp"
#include "cybergeo/text.hpp"

namespace cybergeo {

CsvReader::CsvReader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

bool CsvReader::next(CsvRow& row) {
  row.clear();
  if (first_) {
    first_ = false;
    if (in_.peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (!(bom[0] == '\xEF' && bom[1] == '\xBB' && bom[2] == '\xBF')) {
        for (int i = 2; i >= 0; --i) in_.putback(bom[i]);
      }
    }
  }
  int ch = in_.get();
  if (ch == std::char_traits<char>::eof()) return false;

  record_line_ = line_;
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  for (;; ch = in_.get()) {
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) throw InputError("unterminated quoted field starting on line " +
                                   std::to_string(record_line_));
      row.push_back(std::move(field));
      return true;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == delimiter_) {
      row.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else if (c == '\r' && in_.peek() == '\n') {
      continue;
    } else if (c == '\n') {
      ++line_;
      row.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string csv_escape(std::string_view field, char delimiter) {
  const bool needs_quotes = field.find_first_of(std::string{'"', '\r', '\n', delimiter}) !=
                            std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_.push_back(delimiter_);
    out_ += csv_escape(fields[i], delimiter_);
  }
  out_.push_back('\n');
}

CsvHeader::CsvHeader(const CsvRow& header) : names_(header) {
  for (auto& n : names_) n = std::string(trim(n));
}

std::ptrdiff_t CsvHeader::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

std::size_t CsvHeader::require(std::string_view name) const {
  const auto pos = find(name);
  if (pos < 0) throw InputError("missing required column '" + std::string(name) + "'");
  return static_cast<std::size_t>(pos);
}

}  // namespace cybergeo
