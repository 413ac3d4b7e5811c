#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetreco/errors.hpp"
#include "hetreco/kernel_abi.h"

namespace hetreco {

/// One translation unit of kernel source text, named for diagnostics.
struct ProgramSource {
    std::string unit_name;
    std::string source_text;
};

/// A kernel ready to run: registry key, originating unit, entry point.
struct CompiledKernel {
    std::string name;
    std::string unit_name;
    hetreco_kernel_fn fn = nullptr;
};

/**
 * Session-scoped name-to-kernel map. Additions are all-or-nothing: if any
 * kernel in a batch collides with a registered name (or with another kernel
 * in the same batch) the whole batch is rejected and the registry keeps its
 * previous contents.
 */
class KernelRegistry {
public:
    void add(std::vector<CompiledKernel> kernels);

    const CompiledKernel& find(std::string_view name) const;
    bool contains(std::string_view name) const;

    /// Registered kernel names in sorted order.
    std::vector<std::string> names() const;
    std::size_t size() const { return kernels_.size(); }

private:
    std::map<std::string, CompiledKernel, std::less<>> kernels_;
};

/**
 * Source text of the builtin kernel set, embedded at build time. Loading
 * these into a source-capable device exercises the same compile path as
 * user-supplied programs; backends without source support use their
 * intrinsic copies instead.
 */
std::span<const ProgramSource> builtin_kernel_sources();

}  // namespace hetreco
