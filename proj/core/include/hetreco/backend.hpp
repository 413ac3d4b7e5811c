#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hetreco/device.hpp"
#include "hetreco/kernels.hpp"

namespace hetreco {

/// Opaque device buffer handle, valid only within the backend that issued it.
using BufferId = std::uint64_t;

/// How data moves between host and device memory.
enum class TransferPath {
    Mapped,  ///< device memory is host-visible; transfers are copies within RAM
    Staged,  ///< transfers cross a bus through a staging area
};

/// Buffer bindings for one kernel execution, mirroring the fixed kernel
/// argument convention (input, input header, output, output header, params).
struct KernelBinding {
    BufferId input = 0;
    BufferId input_header = 0;
    BufferId output = 0;
    BufferId output_header = 0;
    std::span<const std::byte> params;
};

/**
 * A compute runtime owning one or more devices. Implementations provide
 * buffer management, host transfers, kernel compilation (when the runtime
 * accepts source programs) and execution over a 1-D global index space.
 *
 * All entry points are synchronous and fail by throwing: AllocationFailure
 * when capacity is exhausted, UnknownHandle for stale buffer ids,
 * InvalidArgument for out-of-range transfer windows, CompileError (carrying
 * per-unit build logs) from compile, and DeviceError from execute.
 */
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::string_view id() const = 0;
    virtual std::vector<DeviceDescriptor> devices() const = 0;
    virtual TransferPath transfer_path() const = 0;
    virtual bool supports_source_kernels() const = 0;

    virtual BufferId allocate(std::uint64_t bytes) = 0;
    virtual void release(BufferId buffer) = 0;
    virtual void upload(BufferId buffer, std::uint64_t offset,
                        std::span<const std::byte> bytes) = 0;
    virtual void download(BufferId buffer, std::uint64_t offset,
                          std::span<std::byte> into) const = 0;
    /// Device-side copy between (or within) buffers; ranges must not overlap.
    virtual void copy(BufferId src, std::uint64_t src_offset, BufferId dst,
                      std::uint64_t dst_offset, std::uint64_t bytes) = 0;

    /// Kernels built into the backend itself, available without compilation.
    virtual std::vector<CompiledKernel> intrinsic_kernels() = 0;

    /**
     * Compiles a batch of source units into kernels. Backends that report
     * supports_source_kernels() == false throw UnsupportedSource. On any
     * build failure the whole batch fails with a CompileError whose
     * diagnostics carry each failing unit's build log verbatim.
     */
    virtual std::vector<CompiledKernel> compile(std::span<const ProgramSource> units) = 0;

    virtual void execute(const CompiledKernel& kernel, const KernelBinding& binding,
                         std::uint64_t global_size) = 0;

    /// Blocks until previously submitted work is complete.
    virtual void synchronize() = 0;
};

/**
 * Process-wide backend list, built once on first use. The reference CPU
 * backend is always first; further backends follow in registration order.
 * Pointers stay valid for the process lifetime.
 */
std::span<Backend* const> backend_snapshot();

/// Backend with the given id from the snapshot; throws InvalidArgument if absent.
Backend& backend_by_id(std::string_view id);

/**
 * Standalone reference backend instance, independent of the process-wide
 * snapshot. capacity_bytes bounds the sum of live allocations; 0 means
 * unlimited. Useful for exhaustion tests and isolated sessions.
 */
std::unique_ptr<Backend> make_reference_backend(std::uint64_t capacity_bytes = 0);

/**
 * CPU JIT backend that compiles kernel source with the host toolchain, or
 * nullptr when no usable compiler is found.
 */
std::unique_ptr<Backend> try_make_cpujit_backend();

}  // namespace hetreco
