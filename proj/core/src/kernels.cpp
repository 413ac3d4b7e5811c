#include "hetreco/kernels.hpp"

#include <set>
#include <utility>

namespace hetreco {

void KernelRegistry::add(std::vector<CompiledKernel> kernels) {
    // Validate the whole batch before touching the map.
    std::set<std::string_view> incoming;
    for (const CompiledKernel& k : kernels) {
        if (k.name.empty()) throw InvalidArgument("kernel with empty name in unit '" + k.unit_name + "'");
        if (k.fn == nullptr) throw InvalidArgument("kernel '" + k.name + "' has no entry point");
        if (!incoming.insert(k.name).second)
            throw DuplicateKernel("kernel '" + k.name + "' appears twice in one batch (unit '" +
                                  k.unit_name + "')");
        if (auto it = kernels_.find(k.name); it != kernels_.end())
            throw DuplicateKernel("kernel '" + k.name + "' from unit '" + k.unit_name +
                                  "' is already registered (unit '" + it->second.unit_name + "')");
    }
    for (CompiledKernel& k : kernels) {
        std::string key = k.name;
        kernels_.emplace(std::move(key), std::move(k));
    }
}

const CompiledKernel& KernelRegistry::find(std::string_view name) const {
    auto it = kernels_.find(name);
    if (it == kernels_.end()) {
        std::string msg = "unknown kernel '" + std::string(name) + "'; registered:";
        if (kernels_.empty()) {
            msg += " (none)";
        } else {
            for (const auto& [key, value] : kernels_) msg += " " + key;
        }
        throw UnknownKernel(msg);
    }
    return it->second;
}

bool KernelRegistry::contains(std::string_view name) const {
    return kernels_.find(name) != kernels_.end();
}

std::vector<std::string> KernelRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(kernels_.size());
    for (const auto& [key, value] : kernels_) out.push_back(key);
    return out;
}

}  // namespace hetreco
