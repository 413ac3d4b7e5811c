#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hetreco/errors.hpp"

namespace hetreco {

enum class DeviceType {
    Cpu,
    Gpu,
    Accelerator,
};

std::string_view device_type_name(DeviceType type);

/// Runtime API version of a device, parsed from "major.minor" text.
struct ApiVersion {
    int major = 0;
    int minor = 0;

    /// Throws InvalidFilter on anything that is not "<digits>.<digits>".
    static ApiVersion parse(std::string_view text);

    std::string str() const { return std::to_string(major) + "." + std::to_string(minor); }

    auto operator<=>(const ApiVersion&) const = default;
};

/// Capability record of one compute device.
struct DeviceDescriptor {
    std::string backend_id;           ///< backend that owns the device
    std::uint32_t device_index = 0;   ///< ordinal within the backend
    DeviceType device_type = DeviceType::Cpu;
    std::string vendor;
    std::string name;
    std::string api_version;          ///< "major.minor"
    std::uint64_t global_memory_bytes = 0;
    std::uint64_t base_alignment_bytes = 1;  ///< power of two
    bool supports_source_kernels = false;

    std::string label() const { return backend_id + ":" + name; }
};

/**
 * Declarative device selection criteria. All present fields must match;
 * an empty filter matches everything. Vendor and name match as
 * case-insensitive substrings; the version bound compares (major, minor)
 * pairs, so a malformed min_api_version is rejected when the filter is
 * built, not at selection time.
 */
class DeviceFilter {
public:
    DeviceFilter() = default;

    DeviceFilter& with_type(DeviceType type);
    DeviceFilter& with_vendor(std::string substring);
    DeviceFilter& with_name(std::string substring);
    DeviceFilter& with_min_api_version(std::string_view version);  // throws InvalidFilter

    /**
     * Parses the textual filter form used by the CLI and the HETRECO_DEVICE
     * environment variable: a comma-separated list of terms, each either a
     * bare device class ("cpu", "gpu", "accelerator", "any") or a
     * "key=value" pair with keys vendor, name, version.
     */
    static DeviceFilter parse(std::string_view text);

    bool matches(const DeviceDescriptor& device) const;

    const std::optional<DeviceType>& device_type() const { return device_type_; }
    const std::optional<std::string>& vendor_substring() const { return vendor_substring_; }
    const std::optional<std::string>& name_substring() const { return name_substring_; }
    const std::optional<ApiVersion>& min_api_version() const { return min_api_version_; }

    bool is_any() const;

    /// Human-readable form, e.g. "{type=gpu, vendor~\"amd\"}".
    std::string describe() const;

private:
    std::optional<DeviceType> device_type_;
    std::optional<std::string> vendor_substring_;
    std::optional<std::string> name_substring_;
    std::optional<ApiVersion> min_api_version_;
};

/**
 * All devices across the registered backends. The reference CPU backend is
 * always present, so the result is never empty. Order is deterministic for
 * a fixed host: reference backend first, then the remaining backends in
 * registration order. The result is a snapshot taken once per process;
 * enumerate and select are read-only and safe to call from any thread.
 */
std::vector<DeviceDescriptor> enumerate_devices();

/**
 * Picks the highest-ranked device matching the filter in one call.
 * Ranking: device class (GPU over accelerator over CPU), then larger
 * global memory, then enumeration order. Throws NoMatchingDevice with a
 * message listing the filter and every candidate when nothing matches.
 */
DeviceDescriptor select_device(const DeviceFilter& filter = {});

/// Pure selection core used by select_device; exposed for testing ranking
/// rules against synthetic device lists.
const DeviceDescriptor& select_from(std::span<const DeviceDescriptor> candidates,
                                    const DeviceFilter& filter);

}  // namespace hetreco
