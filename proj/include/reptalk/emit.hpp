#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace reptalk {

// Formats a real with 12 significant digits so emitted files are stable
// across platforms with correctly rounded printf.
inline std::string fmt_real(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e308" : "-1e308";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Minimal ordered JSON writer. Output keys appear exactly in insertion order;
// reals go through fmt_real.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}

  JsonWriter& begin_object() {
    sep();
    os_ << '{';
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_object() {
    os_ << '}';
    fresh_ = false;
    return *this;
  }
  JsonWriter& begin_array() {
    sep();
    os_ << '[';
    fresh_ = true;
    return *this;
  }
  JsonWriter& end_array() {
    os_ << ']';
    fresh_ = false;
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    os_ << '"' << escape(k) << "\":";
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    sep();
    os_ << fmt_real(v);
    return *this;
  }
  JsonWriter& value(bool v) {
    sep();
    os_ << (v ? "true" : "false");
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    sep();
    os_ << '"' << escape(v) << '"';
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(std::uint64_t v) {
    sep();
    os_ << v;
    return *this;
  }
  JsonWriter& value(int v) {
    sep();
    os_ << v;
    return *this;
  }
  JsonWriter& null() {
    sep();
    os_ << "null";
    return *this;
  }

  template <typename T>
  JsonWriter& kv(const std::string& k, T v) {
    key(k);
    return value(v);
  }
  JsonWriter& kv_null(const std::string& k) {
    key(k);
    return null();
  }

 private:
  void sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!fresh_) os_ << ',';
    fresh_ = false;
  }
  static std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
      }
    }
    return out;
  }

  std::ostream& os_;
  bool fresh_ = true;
  bool pending_value_ = false;
};

inline void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace reptalk
