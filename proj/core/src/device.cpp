#include "hetreco/device.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "hetreco/backend.hpp"

namespace hetreco {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    std::string h = to_lower(haystack);
    std::string n = to_lower(needle);
    return h.find(n) != std::string::npos;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_int_field(std::string_view text, int& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && out >= 0;
}

// Lenient parse for descriptor-side versions; a malformed version simply
// fails any minimum bound instead of throwing mid-selection.
bool try_parse_version(std::string_view text, ApiVersion& out) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return false;
    return parse_int_field(text.substr(0, dot), out.major) &&
           parse_int_field(text.substr(dot + 1), out.minor);
}

int type_rank(DeviceType type) {
    switch (type) {
        case DeviceType::Gpu: return 2;
        case DeviceType::Accelerator: return 1;
        case DeviceType::Cpu: return 0;
    }
    return 0;
}

std::string describe_device(const DeviceDescriptor& d) {
    std::string s = d.label();
    s += " (";
    s += device_type_name(d.device_type);
    s += ", vendor=" + d.vendor;
    s += ", api=" + d.api_version;
    s += ", mem=" + std::to_string(d.global_memory_bytes) + ")";
    return s;
}

}  // namespace

std::string_view device_type_name(DeviceType type) {
    switch (type) {
        case DeviceType::Cpu: return "cpu";
        case DeviceType::Gpu: return "gpu";
        case DeviceType::Accelerator: return "accelerator";
    }
    return "unknown";
}

ApiVersion ApiVersion::parse(std::string_view text) {
    ApiVersion v;
    if (!try_parse_version(text, v))
        throw InvalidFilter("malformed API version '" + std::string(text) +
                            "'; expected \"major.minor\"");
    return v;
}

DeviceFilter& DeviceFilter::with_type(DeviceType type) {
    device_type_ = type;
    return *this;
}

DeviceFilter& DeviceFilter::with_vendor(std::string substring) {
    vendor_substring_ = std::move(substring);
    return *this;
}

DeviceFilter& DeviceFilter::with_name(std::string substring) {
    name_substring_ = std::move(substring);
    return *this;
}

DeviceFilter& DeviceFilter::with_min_api_version(std::string_view version) {
    min_api_version_ = ApiVersion::parse(version);
    return *this;
}

DeviceFilter DeviceFilter::parse(std::string_view text) {
    DeviceFilter filter;
    std::string_view rest = text;
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view term = trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (term.empty()) continue;

        auto eq = term.find('=');
        if (eq == std::string_view::npos) {
            std::string word = to_lower(term);
            if (word == "any") continue;
            if (word == "cpu")
                filter.with_type(DeviceType::Cpu);
            else if (word == "gpu")
                filter.with_type(DeviceType::Gpu);
            else if (word == "accelerator")
                filter.with_type(DeviceType::Accelerator);
            else
                throw InvalidFilter("unknown device class '" + std::string(term) +
                                    "' in filter \"" + std::string(text) + "\"");
            continue;
        }

        std::string key = to_lower(trim(term.substr(0, eq)));
        std::string_view value = trim(term.substr(eq + 1));
        if (key == "vendor")
            filter.with_vendor(std::string(value));
        else if (key == "name")
            filter.with_name(std::string(value));
        else if (key == "version")
            filter.with_min_api_version(value);
        else
            throw InvalidFilter("unknown filter key '" + key + "' in \"" + std::string(text) +
                                "\"");
    }
    return filter;
}

bool DeviceFilter::matches(const DeviceDescriptor& device) const {
    if (device_type_ && device.device_type != *device_type_) return false;
    if (vendor_substring_ && !contains_ci(device.vendor, *vendor_substring_)) return false;
    if (name_substring_ && !contains_ci(device.name, *name_substring_)) return false;
    if (min_api_version_) {
        ApiVersion v;
        if (!try_parse_version(device.api_version, v) || v < *min_api_version_) return false;
    }
    return true;
}

bool DeviceFilter::is_any() const {
    return !device_type_ && !vendor_substring_ && !name_substring_ && !min_api_version_;
}

std::string DeviceFilter::describe() const {
    if (is_any()) return "{any}";
    std::string s = "{";
    auto append = [&s](std::string part) {
        if (s.size() > 1) s += ", ";
        s += part;
    };
    if (device_type_) append("type=" + std::string(device_type_name(*device_type_)));
    if (vendor_substring_) append("vendor~\"" + *vendor_substring_ + "\"");
    if (name_substring_) append("name~\"" + *name_substring_ + "\"");
    if (min_api_version_) append("version>=" + min_api_version_->str());
    s += "}";
    return s;
}

std::vector<DeviceDescriptor> enumerate_devices() {
    std::vector<DeviceDescriptor> out;
    for (Backend* backend : backend_snapshot()) {
        auto devices = backend->devices();
        out.insert(out.end(), devices.begin(), devices.end());
    }
    return out;
}

const DeviceDescriptor& select_from(std::span<const DeviceDescriptor> candidates,
                                    const DeviceFilter& filter) {
    const DeviceDescriptor* best = nullptr;
    for (const DeviceDescriptor& d : candidates) {
        if (!filter.matches(d)) continue;
        if (best == nullptr) {
            best = &d;
            continue;
        }
        int lhs = type_rank(d.device_type);
        int rhs = type_rank(best->device_type);
        if (lhs != rhs) {
            if (lhs > rhs) best = &d;
            continue;
        }
        if (d.global_memory_bytes > best->global_memory_bytes) best = &d;
        // Ties keep the earlier candidate: enumeration order is the final key.
    }
    if (best == nullptr) {
        std::string msg = "no device matches filter " + filter.describe() + "; candidates:";
        if (candidates.empty()) {
            msg += " (none)";
        } else {
            for (const DeviceDescriptor& d : candidates) msg += " " + describe_device(d) + ";";
        }
        throw NoMatchingDevice(msg);
    }
    return *best;
}

DeviceDescriptor select_device(const DeviceFilter& filter) {
    auto candidates = enumerate_devices();
    return select_from(candidates, filter);
}

}  // namespace hetreco
