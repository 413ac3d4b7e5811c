#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetreco/ndarray.hpp"

namespace hetreco {

/// Placement of one array inside a packed allocation.
struct LayoutRecord {
    std::uint64_t offset_bytes = 0;
    ElementType element_type = ElementType::UInt8;
    std::uint32_t rank = 1;
    std::array<std::uint64_t, kMaxRank> dims{1, 1, 1, 1, 1, 1, 1, 1};  // padded with 1

    std::uint64_t element_count() const;
    std::uint64_t byte_size() const;
    std::uint64_t end_offset() const { return offset_bytes + byte_size(); }

    bool operator==(const LayoutRecord&) const = default;
};

/**
 * Describes where each array of a Data set lives inside one contiguous,
 * aligned allocation. Offsets are strictly increasing, aligned, and
 * non-overlapping; record order equals array order.
 *
 * Identity is defined over the records alone: total_bytes and
 * alignment_bytes are host-side packing metadata (allocation size, padding
 * rule) and are not part of the serialized header, which carries exactly
 * what kernels need.
 */
struct LayoutDescriptor {
    std::vector<LayoutRecord> records;
    std::uint64_t total_bytes = 0;
    std::uint64_t alignment_bytes = 1;

    std::size_t array_count() const { return records.size(); }

    bool operator==(const LayoutDescriptor& other) const { return records == other.records; }
};

/// Computes the packed placement of a data set: each array gets the smallest
/// offset at or after the end of the previous one, rounded up to the
/// alignment; total_bytes is the padded end of the last array.
LayoutDescriptor pack(const Data& data, std::uint64_t alignment_bytes);

/**
 * Serializes a layout into the kernel-visible header wire format:
 * little-endian unsigned 64-bit words, word[0] = array count A, followed by
 * A fixed 11-word records [offset_bytes, element_type_code, rank,
 * dim0..dim7] with dims beyond the rank set to 1. Total length is
 * (1 + 11*A) * 8 bytes. This exact buffer is bound to every kernel
 * invocation alongside the data buffer it describes.
 */
std::vector<std::byte> serialize_layout_header(const LayoutDescriptor& layout);

/// Exact inverse of serialize_layout_header over the record fields.
/// alignment_bytes is recovered as the largest power of two dividing every
/// offset and total_bytes as the tight end of the last record.
LayoutDescriptor parse_layout_header(std::span<const std::byte> bytes);

}  // namespace hetreco
