#include "hetreco/session.hpp"

#include <algorithm>
#include <atomic>

namespace hetreco {

namespace {

std::uint64_t next_session_uid() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

DeviceDescriptor device_of(Backend& backend, std::uint32_t index) {
    auto devices = backend.devices();
    if (index >= devices.size())
        throw InvalidArgument("backend '" + std::string(backend.id()) + "' has " +
                              std::to_string(devices.size()) + " device(s); index " +
                              std::to_string(index) + " is out of range");
    return devices[index];
}

}  // namespace

ComputeSession::ComputeSession(const DeviceFilter& filter)
    : ComputeSession(select_device(filter)) {}

ComputeSession::ComputeSession(const DeviceDescriptor& device)
    : backend_(backend_by_id(device.backend_id)), device_(device), uid_(next_session_uid()) {
    alignment_ = std::max<std::uint64_t>(device_.base_alignment_bytes, 256);
}

ComputeSession::ComputeSession(Backend& backend, std::uint32_t device_index)
    : backend_(backend), device_(device_of(backend, device_index)), uid_(next_session_uid()) {
    alignment_ = std::max<std::uint64_t>(device_.base_alignment_bytes, 256);
}

ComputeSession::~ComputeSession() {
    for (auto& [id, entry] : entries_) {
        try {
            backend_.release(entry.data_buffer);
            backend_.release(entry.header_buffer);
        } catch (...) {
            // Best effort: destruction must not throw.
        }
    }
}

const ComputeSession::Entry& ComputeSession::resolve(DataHandle handle) const {
    if (handle.session_uid != uid_)
        throw UnknownHandle("handle belongs to session " + std::to_string(handle.session_uid) +
                            ", not " + std::to_string(uid_));
    auto it = entries_.find(handle.id);
    if (it == entries_.end())
        throw UnknownHandle("unknown data handle " + std::to_string(handle.id));
    return it->second;
}

DataHandle ComputeSession::register_data(const Data& data) {
    LayoutDescriptor layout = pack(data, alignment_);
    std::vector<std::byte> header = serialize_layout_header(layout);

    Entry entry;
    entry.layout = std::move(layout);
    entry.kind = data.kind;
    entry.data_buffer = backend_.allocate(entry.layout.total_bytes);
    try {
        entry.header_buffer = backend_.allocate(header.size());
    } catch (...) {
        backend_.release(entry.data_buffer);
        throw;
    }
    for (std::size_t i = 0; i < data.arrays.size(); ++i)
        backend_.upload(entry.data_buffer, entry.layout.records[i].offset_bytes,
                        data.arrays[i].bytes());
    backend_.upload(entry.header_buffer, 0, header);
    counters_.host_to_device += 1;  // one logical transfer per registration

    DataHandle handle{uid_, next_id_++};
    entries_.emplace(handle.id, std::move(entry));
    return handle;
}

Data ComputeSession::fetch_data(DataHandle handle) {
    const Entry& entry = resolve(handle);
    Data out;
    out.kind = entry.kind;
    out.arrays.reserve(entry.layout.records.size());
    for (const LayoutRecord& record : entry.layout.records) {
        std::vector<std::uint64_t> dims(record.dims.begin(), record.dims.begin() + record.rank);
        NDArray array(record.element_type, std::move(dims));
        backend_.download(entry.data_buffer, record.offset_bytes, array.bytes());
        out.arrays.push_back(std::move(array));
    }
    counters_.device_to_host += 1;  // one logical transfer per fetch
    return out;
}

void ComputeSession::release_data(DataHandle handle) {
    const Entry& entry = resolve(handle);
    backend_.release(entry.data_buffer);
    backend_.release(entry.header_buffer);
    entries_.erase(handle.id);
}

const LayoutDescriptor& ComputeSession::layout_of(DataHandle handle) const {
    return resolve(handle).layout;
}

DataKind ComputeSession::kind_of(DataHandle handle) const { return resolve(handle).kind; }

std::vector<std::byte> ComputeSession::fetch_header_bytes(DataHandle handle) {
    const Entry& entry = resolve(handle);
    std::vector<std::byte> bytes((1 + 11 * entry.layout.records.size()) * 8);
    backend_.download(entry.header_buffer, 0, bytes);
    counters_.device_to_host += 1;
    return bytes;
}

void ComputeSession::copy_array(DataHandle src, std::size_t src_index, DataHandle dst,
                                std::size_t dst_index) {
    const Entry& source = resolve(src);
    const Entry& target = resolve(dst);
    if (src_index >= source.layout.records.size())
        throw InvalidArgument("copy_array: source index " + std::to_string(src_index) +
                              " out of range");
    if (dst_index >= target.layout.records.size())
        throw InvalidArgument("copy_array: destination index " + std::to_string(dst_index) +
                              " out of range");
    const LayoutRecord& from = source.layout.records[src_index];
    const LayoutRecord& to = target.layout.records[dst_index];
    if (from.element_type != to.element_type || from.dims != to.dims)
        throw ShapeMismatch("copy_array: source and destination slots differ in type or shape");
    backend_.copy(source.data_buffer, from.offset_bytes, target.data_buffer, to.offset_bytes,
                  from.byte_size());
}

void ComputeSession::load_builtin_kernels() {
    if (builtins_loaded_) return;
    if (backend_.supports_source_kernels()) {
        auto sources = builtin_kernel_sources();
        registry_.add(backend_.compile(sources));
    } else {
        registry_.add(backend_.intrinsic_kernels());
    }
    builtins_loaded_ = true;
}

void ComputeSession::load_kernels(std::span<const ProgramSource> units) {
    registry_.add(backend_.compile(units));
}

void ComputeSession::launch_kernel(std::string_view name, DataHandle input, DataHandle output,
                                   std::span<const std::byte> params,
                                   std::uint64_t global_size) {
    const CompiledKernel& kernel = registry_.find(name);
    if (global_size == 0)
        throw InvalidArgument("launch of kernel '" + kernel.name + "' with empty index space");
    const Entry& in = resolve(input);
    const Entry& out = resolve(output);
    KernelBinding binding;
    binding.input = in.data_buffer;
    binding.input_header = in.header_buffer;
    binding.output = out.data_buffer;
    binding.output_header = out.header_buffer;
    binding.params = params;
    backend_.execute(kernel, binding, global_size);
}

void ComputeSession::synchronize() { backend_.synchronize(); }

}  // namespace hetreco
