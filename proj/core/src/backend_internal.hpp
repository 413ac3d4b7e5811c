#pragma once

// Shared pieces of the CPU backends; not part of the installed API.

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "hetreco/backend.hpp"

namespace hetreco::detail {

/// Builtin kernels compiled into the library (same sources as the embedded
/// text form). Defined in reference_kernels.cpp.
std::vector<CompiledKernel> reference_intrinsics();

/// Verbatim text of the kernel ABI header, for JIT preambles. Defined in
/// the generated embedded_sources.cpp.
std::string_view kernel_abi_text();

/// Total physical memory, or a 1 GiB fallback when undetectable.
std::uint64_t detect_physical_memory();

/// Persistent process-wide thread pool. run() partitions [0, n) into
/// contiguous chunks; bodies must only write locations derived from their
/// own indices so the split never changes results.
class WorkerPool {
public:
    static WorkerPool& instance();

    void run(std::uint64_t n, const std::function<void(std::uint64_t, std::uint64_t)>& body);
    unsigned thread_count() const { return static_cast<unsigned>(threads_.size()) + 1; }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

private:
    WorkerPool();
    ~WorkerPool();
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::vector<std::thread> threads_;
};

/**
 * Host-memory Backend core: buffer table with range checking and optional
 * capacity accounting, plus pooled kernel execution. Subclasses supply the
 * device identity and the compile path.
 */
class CpuBackendBase : public Backend {
public:
    explicit CpuBackendBase(std::uint64_t capacity_bytes) : capacity_bytes_(capacity_bytes) {}

    TransferPath transfer_path() const override { return TransferPath::Mapped; }

    BufferId allocate(std::uint64_t bytes) override;
    void release(BufferId buffer) override;
    void upload(BufferId buffer, std::uint64_t offset,
                std::span<const std::byte> bytes) override;
    void download(BufferId buffer, std::uint64_t offset,
                  std::span<std::byte> into) const override;
    void copy(BufferId src, std::uint64_t src_offset, BufferId dst, std::uint64_t dst_offset,
              std::uint64_t bytes) override;

    void execute(const CompiledKernel& kernel, const KernelBinding& binding,
                 std::uint64_t global_size) override;
    void synchronize() override {}

    std::uint64_t live_bytes() const;

protected:
    struct Buffer {
        std::unique_ptr<std::byte[], void (*)(std::byte*)> data;
        std::uint64_t size = 0;
    };

    const Buffer& resolve(BufferId buffer) const;

    mutable std::mutex mutex_;
    std::unordered_map<BufferId, Buffer> buffers_;
    BufferId next_id_ = 1;
    std::uint64_t capacity_bytes_ = 0;  ///< 0 = unlimited
    std::uint64_t used_bytes_ = 0;
};

}  // namespace hetreco::detail
