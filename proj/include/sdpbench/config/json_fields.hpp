// Small helpers for reading JSON documents with field-path diagnostics.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sdpbench/core/types.hpp"

namespace sdpbench::config {

using Json = nlohmann::json;

class FieldError : public ParseError {
 public:
  FieldError(std::string field, const std::string& what)
      : ParseError("field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

/// Parses text, turning syntax errors into "line L, column C" diagnostics.
inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const auto upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_file(const std::string& path) { return parse_text(read_file(path), path); }

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw FieldError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw FieldError(join_path(path, key), "missing");
  return *it;
}

inline double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw FieldError(path, "expected a number");
  return v.get<double>();
}

inline double positive(const Json& v, const std::string& path) {
  const double d = number(v, path);
  if (!(d > 0)) throw FieldError(path, "must be > 0");
  return d;
}

inline double non_negative(const Json& v, const std::string& path) {
  const double d = number(v, path);
  if (d < 0) throw FieldError(path, "must be >= 0");
  return d;
}

inline std::uint64_t integer(const Json& v, const std::string& path, std::uint64_t min = 0) {
  if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>())))
    throw FieldError(path, "expected an integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw FieldError(path, "must be >= 0");
  const auto n = v.is_number_integer() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(v.get<double>());
  if (n < min) throw FieldError(path, "must be >= " + std::to_string(min));
  return n;
}

inline std::string text(const Json& v, const std::string& path) {
  if (!v.is_string()) throw FieldError(path, "expected a string");
  return v.get<std::string>();
}

/// Runs `parse` and re-labels ParseErrors from enum parsers with the field path.
template <class F>
auto field(const std::string& path, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const FieldError&) {
    throw;
  } catch (const ParseError& e) {
    throw FieldError(path, e.what());
  }
}

}  // namespace sdpbench::config
