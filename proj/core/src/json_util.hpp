#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "lela/error.hpp"

namespace lela::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw SyntaxError(e.what());
  }
}

inline const Json& require(const Json& object, const char* key, const std::string& path) {
  if (!object.is_object()) throw SchemaError(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

inline std::string require_string(const Json& object, const char* key, const std::string& path) {
  const Json& v = require(object, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline double require_number(const Json& object, const char* key, const std::string& path) {
  const Json& v = require(object, key, path);
  if (!v.is_number()) throw SchemaError(path + "." + key, "expected a number");
  return v.get<double>();
}

inline long long require_integer(const Json& object, const char* key, const std::string& path) {
  const Json& v = require(object, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key, "expected an integer");
  return v.get<long long>();
}

inline const Json& require_array(const Json& object, const char* key, const std::string& path) {
  const Json& v = require(object, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected an array");
  return v;
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

}  // namespace lela::detail
