#include "hetreco/backend.hpp"

#include <unistd.h>

#include <bit>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <latch>
#include <new>
#include <thread>

#include "backend_internal.hpp"

// The layout header and parameter block formats are little-endian byte
// sequences that CPU kernels read through plain pointer casts.
static_assert(std::endian::native == std::endian::little,
              "hetreco assumes a little-endian host");

namespace hetreco {
namespace detail {

std::uint64_t detect_physical_memory() {
    long pages = ::sysconf(_SC_PHYS_PAGES);
    long page_size = ::sysconf(_SC_PAGE_SIZE);
    if (pages <= 0 || page_size <= 0) return std::uint64_t{1} << 30;
    return static_cast<std::uint64_t>(pages) * static_cast<std::uint64_t>(page_size);
}

// ---- worker pool -------------------------------------------------------------

namespace {
// Below this many work items the dispatch overhead dominates; run inline.
constexpr std::uint64_t kInlineThreshold = 16384;
}  // namespace

struct WorkerPool::Impl {
    struct Task {
        const std::function<void(std::uint64_t, std::uint64_t)>* body;
        std::uint64_t begin;
        std::uint64_t end;
        std::latch* done;
        std::exception_ptr* error;
        std::mutex* error_mutex;
    };

    std::mutex mutex;
    std::condition_variable cv;
    std::deque<Task> queue;
    bool stop = false;

    void worker_loop() {
        for (;;) {
            Task task;
            {
                std::unique_lock lock(mutex);
                cv.wait(lock, [this] { return stop || !queue.empty(); });
                if (queue.empty()) return;  // stop requested and drained
                task = queue.front();
                queue.pop_front();
            }
            try {
                (*task.body)(task.begin, task.end);
            } catch (...) {
                std::lock_guard lock(*task.error_mutex);
                if (!*task.error) *task.error = std::current_exception();
            }
            task.done->count_down();
        }
    }
};

WorkerPool::WorkerPool() : impl_(std::make_unique<Impl>()) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (hw > 16) hw = 16;
    for (unsigned i = 0; i + 1 < hw; ++i)
        threads_.emplace_back([this] { impl_->worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(impl_->mutex);
        impl_->stop = true;
    }
    impl_->cv.notify_all();
    for (std::thread& t : threads_) t.join();
}

WorkerPool& WorkerPool::instance() {
    static WorkerPool pool;
    return pool;
}

void WorkerPool::run(std::uint64_t n,
                     const std::function<void(std::uint64_t, std::uint64_t)>& body) {
    if (n == 0) return;
    const std::uint64_t parts = thread_count();
    if (n < kInlineThreshold || parts == 1) {
        body(0, n);
        return;
    }
    const std::uint64_t chunk = (n + parts - 1) / parts;
    std::exception_ptr error;
    std::mutex error_mutex;
    // Chunks 1..parts-1 go to the pool; the caller runs chunk 0 itself.
    std::ptrdiff_t submitted = 0;
    for (std::uint64_t p = 1; p < parts && p * chunk < n; ++p) ++submitted;
    std::latch done(submitted);
    {
        std::lock_guard lock(impl_->mutex);
        for (std::uint64_t p = 1; p < parts && p * chunk < n; ++p) {
            std::uint64_t begin = p * chunk;
            std::uint64_t end = std::min(n, begin + chunk);
            impl_->queue.push_back({&body, begin, end, &done, &error, &error_mutex});
        }
    }
    impl_->cv.notify_all();
    try {
        body(0, std::min(n, chunk));
    } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
    }
    done.wait();
    if (error) std::rethrow_exception(error);
}

// ---- buffer table -------------------------------------------------------------

namespace {

constexpr std::uint64_t kBufferAlign = 256;

void aligned_delete(std::byte* p) { ::operator delete[](p, std::align_val_t(kBufferAlign)); }

std::unique_ptr<std::byte[], void (*)(std::byte*)> aligned_zeroed(std::uint64_t bytes) {
    void* raw = ::operator new[](bytes, std::align_val_t(kBufferAlign));
    std::memset(raw, 0, bytes);
    return {static_cast<std::byte*>(raw), &aligned_delete};
}

}  // namespace

BufferId CpuBackendBase::allocate(std::uint64_t bytes) {
    std::lock_guard lock(mutex_);
    if (capacity_bytes_ != 0 &&
        (bytes > capacity_bytes_ || used_bytes_ > capacity_bytes_ - bytes))
        throw AllocationFailure("allocation of " + std::to_string(bytes) +
                                " bytes exceeds device capacity (" +
                                std::to_string(capacity_bytes_ - used_bytes_) + " of " +
                                std::to_string(capacity_bytes_) + " bytes free)");
    Buffer buffer{nullptr, bytes};
    try {
        buffer.data = aligned_zeroed(bytes == 0 ? 1 : bytes);
    } catch (const std::bad_alloc&) {
        throw AllocationFailure("allocation of " + std::to_string(bytes) + " bytes failed");
    }
    BufferId id = next_id_++;
    used_bytes_ += bytes;
    buffers_.emplace(id, std::move(buffer));
    return id;
}

void CpuBackendBase::release(BufferId buffer) {
    std::lock_guard lock(mutex_);
    auto it = buffers_.find(buffer);
    if (it == buffers_.end())
        throw UnknownHandle("release of unknown buffer " + std::to_string(buffer));
    used_bytes_ -= it->second.size;
    buffers_.erase(it);
}

const CpuBackendBase::Buffer& CpuBackendBase::resolve(BufferId buffer) const {
    auto it = buffers_.find(buffer);
    if (it == buffers_.end()) throw UnknownHandle("unknown buffer " + std::to_string(buffer));
    return it->second;
}

namespace {
void check_range(const char* what, std::uint64_t offset, std::uint64_t length,
                 std::uint64_t size) {
    if (offset > size || length > size - offset)
        throw InvalidArgument(std::string(what) + " window [" + std::to_string(offset) + ", " +
                              std::to_string(offset + length) + ") exceeds buffer size " +
                              std::to_string(size));
}
}  // namespace

void CpuBackendBase::upload(BufferId buffer, std::uint64_t offset,
                            std::span<const std::byte> bytes) {
    std::lock_guard lock(mutex_);
    const Buffer& b = resolve(buffer);
    check_range("upload", offset, bytes.size(), b.size);
    std::memcpy(b.data.get() + offset, bytes.data(), bytes.size());
}

void CpuBackendBase::download(BufferId buffer, std::uint64_t offset,
                              std::span<std::byte> into) const {
    std::lock_guard lock(mutex_);
    const Buffer& b = resolve(buffer);
    check_range("download", offset, into.size(), b.size);
    std::memcpy(into.data(), b.data.get() + offset, into.size());
}

void CpuBackendBase::copy(BufferId src, std::uint64_t src_offset, BufferId dst,
                          std::uint64_t dst_offset, std::uint64_t bytes) {
    std::lock_guard lock(mutex_);
    const Buffer& s = resolve(src);
    const Buffer& d = resolve(dst);
    check_range("copy source", src_offset, bytes, s.size);
    check_range("copy destination", dst_offset, bytes, d.size);
    if (src == dst && src_offset < dst_offset + bytes && dst_offset < src_offset + bytes)
        throw InvalidArgument("overlapping copy within buffer " + std::to_string(src));
    std::memcpy(d.data.get() + dst_offset, s.data.get() + src_offset, bytes);
}

std::uint64_t CpuBackendBase::live_bytes() const {
    std::lock_guard lock(mutex_);
    return used_bytes_;
}

void CpuBackendBase::execute(const CompiledKernel& kernel, const KernelBinding& binding,
                             std::uint64_t global_size) {
    if (kernel.fn == nullptr)
        throw DeviceError(kernel.name, "kernel has no entry point");
    hetreco_kernel_args args{};
    {
        std::lock_guard lock(mutex_);
        args.in = resolve(binding.input).data.get();
        args.in_layout = reinterpret_cast<const std::uint64_t*>(
            resolve(binding.input_header).data.get());
        args.out = resolve(binding.output).data.get();
        args.out_layout = reinterpret_cast<const std::uint64_t*>(
            resolve(binding.output_header).data.get());
    }
    args.params = binding.params.data();
    args.params_size = binding.params.size();
    hetreco_kernel_fn fn = kernel.fn;
    try {
        WorkerPool::instance().run(global_size,
                                   [&args, fn, global_size](std::uint64_t begin, std::uint64_t end) {
                                       for (std::uint64_t g = begin; g < end; ++g)
                                           fn(&args, g, global_size);
                                   });
    } catch (const std::exception& e) {
        throw DeviceError(kernel.name, e.what());
    }
}

// ---- reference backend ---------------------------------------------------------

namespace {

class ReferenceBackend final : public CpuBackendBase {
public:
    explicit ReferenceBackend(std::uint64_t capacity_bytes) : CpuBackendBase(capacity_bytes) {}

    std::string_view id() const override { return "reference"; }
    bool supports_source_kernels() const override { return false; }

    std::vector<DeviceDescriptor> devices() const override {
        DeviceDescriptor d;
        d.backend_id = "reference";
        d.device_index = 0;
        d.device_type = DeviceType::Cpu;
        d.vendor = "hetreco";
        d.name = "reference-cpu";
        d.api_version = "1.2";
        d.global_memory_bytes =
            capacity_bytes_ != 0 ? capacity_bytes_ : detect_physical_memory();
        d.base_alignment_bytes = kBufferAlign;
        d.supports_source_kernels = false;
        return {d};
    }

    std::vector<CompiledKernel> intrinsic_kernels() override { return reference_intrinsics(); }

    std::vector<CompiledKernel> compile(std::span<const ProgramSource>) override {
        throw UnsupportedSource(
            "backend 'reference' cannot compile kernel source; select a source-capable device");
    }
};

}  // namespace
}  // namespace detail

std::unique_ptr<Backend> make_reference_backend(std::uint64_t capacity_bytes) {
    return std::make_unique<detail::ReferenceBackend>(capacity_bytes);
}

namespace {

std::vector<std::unique_ptr<Backend>>& owned_backends() {
    static std::vector<std::unique_ptr<Backend>> list = [] {
        std::vector<std::unique_ptr<Backend>> backends;
        backends.push_back(make_reference_backend());
        if (auto jit = try_make_cpujit_backend()) backends.push_back(std::move(jit));
        return backends;
    }();
    return list;
}

}  // namespace

std::span<Backend* const> backend_snapshot() {
    static const std::vector<Backend*> pointers = [] {
        std::vector<Backend*> ptrs;
        for (const auto& backend : owned_backends()) ptrs.push_back(backend.get());
        return ptrs;
    }();
    return pointers;
}

Backend& backend_by_id(std::string_view id) {
    std::string known;
    for (Backend* backend : backend_snapshot()) {
        if (backend->id() == id) return *backend;
        if (!known.empty()) known += ", ";
        known += backend->id();
    }
    throw InvalidArgument("unknown backend '" + std::string(id) + "'; known backends: " + known);
}

}  // namespace hetreco
