#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>

// Prompt templates and other text resources, embedded at build time from
// resources/. Bump kVersion whenever a resource's wording changes.
namespace omega::resources {

inline constexpr int kVersion = 1;

const std::map<std::string, std::string, std::less<>>& all();

/// Throws omega::Error when `name` is not a bundled resource.
const std::string& get(std::string_view name);

}  // namespace omega::resources
