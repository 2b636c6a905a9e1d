#pragma once

// Field-by-field reader that rejects unknown keys and wrong types, naming
// the offending JSON pointer.

#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>

#include "vironment/codec.hpp"

namespace vironment::detail {

class StrictFields {
 public:
  StrictFields(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError(path_, "expected an object");
  }

  const nlohmann::json* find(const std::string& key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    const nlohmann::json* v = find(key);
    if (!v) return std::nullopt;
    return convert<T>(*v, path_ + "/" + key);
  }

  template <class T>
  T required(const std::string& key) {
    auto v = optional<T>(key);
    if (!v) throw SchemaError(path_ + "/" + key, "missing required field");
    return *v;
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  void skip_all() {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) used_.insert(it.key());
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!used_.count(it.key())) throw SchemaError(path_ + "/" + it.key(), "unknown field");
    }
  }

  template <class T>
  static T convert(const nlohmann::json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw SchemaError(path, "expected a string");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw SchemaError(path, "expected a number");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
          throw SchemaError(path, "expected a non-negative integer");
        }
      }
    } else if constexpr (std::is_same_v<T, nlohmann::json>) {
      return v;
    }
    return v.get<T>();
  }

 private:
  const nlohmann::json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace vironment::detail
