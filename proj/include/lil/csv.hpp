#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace lil::csv {

// Shortest round-trip decimal form, stable across runs of the same binary.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string quote_if_needed(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// RFC 4180 writer: comma separated, CRLF line endings.
class Writer {
 public:
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) body_ << ',';
      body_ << quote_if_needed(fields[i]);
    }
    body_ << "\r\n";
  }

  std::string str() const { return body_.str(); }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    out << body_.str();
  }

 private:
  std::ostringstream body_;
};

class RowBuilder {
 public:
  RowBuilder& num(double v) {
    fields_.push_back(format_double(v));
    return *this;
  }
  RowBuilder& integer(long long v) {
    fields_.push_back(std::to_string(v));
    return *this;
  }
  RowBuilder& text(std::string s) {
    fields_.push_back(std::move(s));
    return *this;
  }
  RowBuilder& blank() {
    fields_.emplace_back();
    return *this;
  }
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

}  // namespace lil::csv
