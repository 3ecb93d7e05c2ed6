#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "qcspan/errors.hpp"
#include "qcspan/io.hpp"

namespace qcspan {

/// Decimal with 12 significant digits; used for continuous-layer outputs only.
inline std::string format_decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace detail

/// RFC 4180 with LF line endings; the header row is always present.
inline std::string csv_to_string(const std::vector<std::string>& header,
                                 const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out += ',';
    out += detail::csv_escape(header[c]);
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      fail(Errc::InvalidArgument, "csv row width does not match header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += detail::csv_escape(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline void emit_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  write_text_atomic(path, csv_to_string(header, rows));
}

}  // namespace qcspan
