#include "omega/resources.hpp"

#include "omega/error.hpp"

namespace omega::resources {

const std::string& get(std::string_view name) {
    const auto& table = all();
    auto it = table.find(name);
    if (it == table.end()) throw Error("missing resource '" + std::string(name) + "'");
    return it->second;
}

}  // namespace omega::resources
