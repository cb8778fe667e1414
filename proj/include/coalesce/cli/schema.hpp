#pragma once

#include <cmath>
#include <json.hpp>
#include <string>
#include <vector>

#include "coalesce/cli/embedded_schema.hpp"
#include "coalesce/io/format.hpp"

namespace coalesce::cli {

using Json = nlohmann::ordered_json;

/// Validator for the subset of JSON Schema used by job_config.schema.json:
/// type, enum, minimum/maximum (and exclusive forms), multipleOf, minLength,
/// required, properties, additionalProperties=false, items, minItems/maxItems,
/// anyOf, local $ref, default, and the x-discriminator dispatch keyword.
/// Defaults are written into the instance as it is walked.
class SchemaValidator {
 public:
  explicit SchemaValidator(Json schema) : root_(std::move(schema)) {}

  static const SchemaValidator& embedded() {
    static const SchemaValidator v(Json::parse(kEmbeddedSchema));
    return v;
  }

  const Json& schema() const noexcept { return root_; }

  /// Every violation as "<json path>: <message>"; `instance` receives defaults.
  std::vector<std::string> validate(Json& instance) const {
    std::vector<std::string> errors;
    check(root_, instance, "$", errors);
    return errors;
  }

 private:
  const Json& resolve(const Json& s) const {
    if (!s.contains("$ref")) return s;
    const std::string ref = s["$ref"];
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw std::logic_error("schema: unsupported $ref " + ref);
    return root_["$defs"].at(ref.substr(prefix.size()));
  }

  static bool has_type(const Json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number() && std::isfinite(v.get<double>());
    if (t == "null") return v.is_null();
    return false;
  }

  static std::string range_message(const Json& s) {
    std::string lo, hi;
    char lb = '[', rb = ']';
    if (s.contains("exclusiveMinimum")) {
      lo = io::format_double(s["exclusiveMinimum"].get<double>());
      lb = '(';
    } else if (s.contains("minimum")) {
      lo = io::format_double(s["minimum"].get<double>());
    }
    if (s.contains("exclusiveMaximum")) {
      hi = io::format_double(s["exclusiveMaximum"].get<double>());
      rb = ')';
    } else if (s.contains("maximum")) {
      hi = io::format_double(s["maximum"].get<double>());
    }
    if (!lo.empty() && !hi.empty()) return "must be in " + std::string(1, lb) + lo + "," + hi + std::string(1, rb);
    if (!lo.empty()) return std::string("must be ") + (lb == '(' ? "> " : ">= ") + lo;
    return std::string("must be ") + (rb == ')' ? "< " : "<= ") + hi;
  }

  static std::string list(const Json& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + values[i].dump();
    return out + "]";
  }

  void check(const Json& schema_in, Json& v, const std::string& path, std::vector<std::string>& errors) const {
    const Json& s = resolve(schema_in);
    auto fail = [&](const std::string& msg) { errors.push_back(path + ": " + msg); };

    if (s.contains("anyOf")) {
      for (const auto& alt : s["anyOf"]) {
        std::vector<std::string> sub;
        Json copy = v;
        check(alt, copy, path, sub);
        if (sub.empty()) {
          v = std::move(copy);
          return;
        }
      }
      fail(s.contains("description") ? "must be a " + s["description"].get<std::string>()
                                      : "does not match any allowed form");
      return;
    }
    if (s.contains("type") && !has_type(v, s["type"])) {
      fail("must be of type " + s["type"].get<std::string>());
      return;
    }
    if (s.contains("enum")) {
      const auto& e = s["enum"];
      if (std::find(e.begin(), e.end(), v) == e.end()) fail("must be one of " + list(e));
      return;
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      const bool bad = (s.contains("minimum") && x < s["minimum"].get<double>()) ||
                       (s.contains("maximum") && x > s["maximum"].get<double>()) ||
                       (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>()) ||
                       (s.contains("exclusiveMaximum") && x >= s["exclusiveMaximum"].get<double>());
      if (bad) fail(range_message(s));
      if (s.contains("multipleOf")) {
        const double m = s["multipleOf"].get<double>();
        if (std::fmod(x, m) != 0.0)
          fail(m == 2.0 ? std::string("must be even") : "must be a multiple of " + io::format_double(m));
      }
    }
    if (v.is_string() && s.contains("minLength") && v.get<std::string>().size() < s["minLength"].get<std::size_t>())
      fail("must not be empty");
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
        fail("must have at least " + s["minItems"].dump() + " item(s)");
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>())
        fail("must have at most " + s["maxItems"].dump() + " item(s)");
      if (s.contains("items"))
        for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], path + "[" + std::to_string(i) + "]", errors);
    }
    if (v.is_object()) check_object(s, v, path, errors);
  }

  void check_object(const Json& s, Json& v, const std::string& path, std::vector<std::string>& errors) const {
    if (s.contains("x-discriminator")) {
      const auto& d = s["x-discriminator"];
      const std::string key = d["property"];
      const auto& mapping = d["mapping"];
      if (!v.contains(key)) {
        errors.push_back(path + "." + key + ": is required");
        return;
      }
      const auto& tag = v[key];
      if (!tag.is_string() || !mapping.contains(tag.get<std::string>())) {
        Json names = Json::array();
        for (const auto& [name, _] : mapping.items()) names.push_back(name);
        errors.push_back(path + "." + key + ": must be one of " + list(names));
        return;
      }
      check(Json{{"$ref", mapping[tag.get<std::string>()]}}, v, path, errors);
      return;
    }
    const Json empty = Json::object();
    const Json& props = s.contains("properties") ? s["properties"] : empty;
    if (s.contains("required"))
      for (const auto& r : s["required"])
        if (!v.contains(r.get<std::string>())) errors.push_back(path + "." + r.get<std::string>() + ": is required");
    if (s.value("additionalProperties", true) == false)
      for (const auto& [k, _] : v.items())
        if (!props.contains(k)) errors.push_back(path + "." + k + ": unknown key");
    for (const auto& [k, sub] : props.items()) {
      if (v.contains(k)) {
        check(sub, v[k], path + "." + k, errors);
      } else {
        const Json& rs = resolve(sub);
        if (sub.contains("default"))
          v[k] = sub["default"];
        else if (rs.contains("default"))
          v[k] = rs["default"];
      }
    }
  }

  Json root_;
};

}  // namespace coalesce::cli
