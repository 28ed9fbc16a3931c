#pragma once

#include "sphericity/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <string>

namespace sphericity::detail {

using nlohmann::json;

inline std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
inline std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

inline const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "/" : path));
    const auto it = j.find(key);
    if (it == j.end()) throw ConfigError(fmt::format("{}: missing required field", child(path, key)));
    return *it;
}

template <class T>
T as(const json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("{}: {}", path.empty() ? "/" : path, e.what()));
    }
}

template <class T>
T read(const json& j, const std::string& key, const std::string& path) {
    return as<T>(require(j, key, path), child(path, key));
}

template <class T>
T read_or(const json& j, const std::string& key, const std::string& path, T fallback) {
    if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "/" : path));
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return as<T>(*it, child(path, key));
}

}  // namespace sphericity::detail
