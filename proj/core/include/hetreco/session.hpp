#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hetreco/backend.hpp"
#include "hetreco/device.hpp"
#include "hetreco/kernels.hpp"
#include "hetreco/layout.hpp"
#include "hetreco/ndarray.hpp"

namespace hetreco {

/// Opaque reference to data registered in one session.
struct DataHandle {
    std::uint64_t session_uid = 0;
    std::uint64_t id = 0;

    bool valid() const { return id != 0; }
    bool operator==(const DataHandle&) const = default;
};

/// Logical host/device transfer counts. Registering a data set is one
/// host-to-device transfer and fetching it back is one device-to-host
/// transfer, regardless of how many arrays it packs; device-side copies and
/// kernel launches move nothing across.
struct TransferCounters {
    std::uint64_t host_to_device = 0;
    std::uint64_t device_to_host = 0;

    bool operator==(const TransferCounters&) const = default;
};

/**
 * A device session: one selected device plus everything needed to use it —
 * packed data buffers, the kernel registry, and an execution queue. The
 * constructor performs device selection in a single call; from then on data
 * stays on the device until explicitly fetched, so chained operations run
 * with zero intermediate transfers.
 *
 * Each registered Data set occupies one contiguous device buffer laid out
 * by pack(), next to a second small buffer holding the serialized layout
 * header that kernels use to locate the packed arrays.
 *
 * Sessions are single-owner objects: not copyable, not movable. Launches
 * execute in submission order and surface failures eagerly.
 */
class ComputeSession {
public:
    /// Selects a device matching the filter (one-call setup).
    explicit ComputeSession(const DeviceFilter& filter = {});

    /// Uses a previously selected device.
    explicit ComputeSession(const DeviceDescriptor& device);

    /// Runs on an externally owned backend (testing, embedding). The backend
    /// must outlive the session.
    explicit ComputeSession(Backend& backend, std::uint32_t device_index = 0);

    ~ComputeSession();

    ComputeSession(const ComputeSession&) = delete;
    ComputeSession& operator=(const ComputeSession&) = delete;

    const DeviceDescriptor& device() const { return device_; }
    Backend& backend() { return backend_; }
    std::uint64_t uid() const { return uid_; }

    // ---- data ----------------------------------------------------------

    DataHandle register_data(const Data& data);
    Data fetch_data(DataHandle handle);
    void release_data(DataHandle handle);

    const LayoutDescriptor& layout_of(DataHandle handle) const;
    DataKind kind_of(DataHandle handle) const;
    std::size_t live_data_count() const { return entries_.size(); }

    /// Downloads the device-resident layout header verbatim (one
    /// device-to-host transfer).
    std::vector<std::byte> fetch_header_bytes(DataHandle handle);

    /// Device-side copy of one packed array into a same-shaped slot of
    /// another data set. No host transfer.
    void copy_array(DataHandle src, std::size_t src_index, DataHandle dst,
                    std::size_t dst_index);

    // ---- kernels ---------------------------------------------------------

    /// Loads the builtin kernel set: compiled from embedded source on
    /// source-capable devices, intrinsic otherwise. Idempotent.
    void load_builtin_kernels();

    /// Compiles and registers user program units (all-or-nothing).
    void load_kernels(std::span<const ProgramSource> units);

    const KernelRegistry& kernels() const { return registry_; }

    /**
     * Runs a registered kernel over [0, global_size) with the fixed
     * argument convention bound to the two handles' buffers. Failures
     * surface eagerly as DeviceError carrying the kernel name.
     */
    void launch_kernel(std::string_view name, DataHandle input, DataHandle output,
                       std::span<const std::byte> params, std::uint64_t global_size);

    /// Blocks until queued work completes.
    void synchronize();

    // ---- accounting ------------------------------------------------------

    TransferCounters counters() const { return counters_; }
    void reset_counters() { counters_ = {}; }

private:
    struct Entry {
        BufferId data_buffer = 0;
        BufferId header_buffer = 0;
        LayoutDescriptor layout;
        DataKind kind = DataKind::Generic;
    };

    const Entry& resolve(DataHandle handle) const;

    Backend& backend_;
    DeviceDescriptor device_;
    std::uint64_t uid_ = 0;
    std::uint64_t alignment_ = 256;
    std::uint64_t next_id_ = 1;
    std::unordered_map<std::uint64_t, Entry> entries_;
    KernelRegistry registry_;
    TransferCounters counters_;
    bool builtins_loaded_ = false;
};

}  // namespace hetreco
