// JSON-lines records and CSV tables with fixed formatting, so that repeated
// runs produce byte-identical output.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polywalk::io {

/// %.17g; non-finite values have no JSON spelling and become null.
inline std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

/// A flat JSON object whose keys print in insertion order.
class Record {
 public:
  Record() { fields_.reserve(8); }

  Record& add(std::string_view key, double v) { return raw(key, format_double(v)); }
  Record& add(std::string_view key, int v) { return raw(key, std::to_string(v)); }
  Record& add(std::string_view key, std::int64_t v) { return raw(key, std::to_string(v)); }
  Record& add(std::string_view key, std::uint64_t v) { return raw(key, std::to_string(v)); }
  Record& add(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  Record& add(std::string_view key, std::string_view v) { return raw(key, quote(v)); }
  Record& add(std::string_view key, const char* v) { return raw(key, quote(v)); }
  Record& add(std::string_view key, const Record& v) { return raw(key, v.str()); }
  Record& add_null(std::string_view key) { return raw(key, "null"); }

  bool empty() const { return fields_.empty(); }

  std::string str() const {
    std::string out = "{";
    for (std::size_t k = 0; k < fields_.size(); ++k) {
      if (k) out += ',';
      out += quote(fields_[k].first) + ':' + fields_[k].second;
    }
    return out + "}";
  }

 private:
  Record& raw(std::string_view key, std::string value) {
    fields_.emplace_back(std::string(key), std::move(value));
    return *this;
  }

  std::vector<std::pair<std::string, std::string>> fields_;
};

inline void emit(std::ostream& out, const Record& r) { out << r.str() << '\n'; }

/// Header row then one row per entry; LF endings regardless of platform.
inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
}

}  // namespace polywalk::io
