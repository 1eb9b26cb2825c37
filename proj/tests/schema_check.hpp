#pragma once

// Minimal JSON Schema subset: type, enum, required, properties,
// additionalProperties (bool), items, minimum, minLength, maxLength.

#include <string>
#include <vector>

#include <json.hpp>

namespace schema {

inline bool type_matches(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

inline void validate(const nlohmann::json& v, const nlohmann::json& s, const std::string& path,
                     std::vector<std::string>& errors) {
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto& t : s["type"]) ok = ok || type_matches(v, t.get<std::string>());
    } else {
      ok = type_matches(v, s["type"].get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": wrong type");
      return;
    }
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(path + ": not in enum");
  }
  if (v.is_string()) {
    const auto len = v.get<std::string>().size();
    if (s.contains("minLength") && len < s["minLength"].get<std::size_t>()) errors.push_back(path + ": too short");
    if (s.contains("maxLength") && len > s["maxLength"].get<std::size_t>()) errors.push_back(path + ": too long");
  }
  if (v.is_number() && s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
    errors.push_back(path + ": below minimum");
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) errors.push_back(path + ": missing " + r.get<std::string>());
    const nlohmann::json props = s.value("properties", nlohmann::json::object());
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (props.contains(it.key()))
        validate(it.value(), props[it.key()], path + "/" + it.key(), errors);
      else if (s.contains("additionalProperties") && s["additionalProperties"] == false)
        errors.push_back(path + ": unexpected " + it.key());
    }
  }
  if (v.is_array() && s.contains("items"))
    for (std::size_t i = 0; i < v.size(); ++i) validate(v[i], s["items"], path + "/" + std::to_string(i), errors);
}

inline std::vector<std::string> validate(const nlohmann::json& v, const nlohmann::json& s) {
  std::vector<std::string> errors;
  validate(v, s, "", errors);
  return errors;
}

}  // namespace schema
