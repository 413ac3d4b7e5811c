#include "hetreco/layout.hpp"

#include <cstring>
#include <limits>
#include <string>

namespace hetreco {

namespace {

constexpr std::size_t kWordsPerRecord = 11;

bool is_power_of_two(std::uint64_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

std::uint64_t round_up(std::uint64_t value, std::uint64_t alignment) {
    const std::uint64_t rem = value % alignment;
    if (rem == 0) {
        return value;
    }
    const std::uint64_t pad = alignment - rem;
    if (value > std::numeric_limits<std::uint64_t>::max() - pad) {
        throw Overflow("packed size overflows 64 bits");
    }
    return value + pad;
}

void put_word(std::vector<std::byte>& out, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::byte>((word >> (8 * i)) & 0xff));
    }
}

std::uint64_t get_word(std::span<const std::byte> bytes, std::size_t word_index) {
    std::uint64_t word = 0;
    for (int i = 7; i >= 0; --i) {
        word = (word << 8) | static_cast<std::uint64_t>(bytes[word_index * 8 + i]);
    }
    return word;
}

}  // namespace

std::uint64_t LayoutRecord::element_count() const {
    std::uint64_t count = 1;
    for (std::uint32_t d = 0; d < rank; ++d) {
        count *= dims[d];
    }
    return count;
}

std::uint64_t LayoutRecord::byte_size() const {
    return element_count() * element_size(element_type);
}

LayoutDescriptor pack(const Data& data, std::uint64_t alignment_bytes) {
    if (data.empty()) {
        throw EmptyData("cannot pack a data set with no arrays");
    }
    if (!is_power_of_two(alignment_bytes)) {
        throw InvalidArgument("alignment must be a power of two, got " +
                              std::to_string(alignment_bytes));
    }

    LayoutDescriptor layout;
    layout.alignment_bytes = alignment_bytes;
    layout.records.reserve(data.arrays.size());

    std::uint64_t cursor = 0;
    for (const NDArray& array : data.arrays) {
        LayoutRecord rec;
        rec.offset_bytes = round_up(cursor, alignment_bytes);
        rec.element_type = array.element_type();
        rec.rank = static_cast<std::uint32_t>(array.rank());
        for (std::size_t d = 0; d < array.rank(); ++d) {
            rec.dims[d] = array.dims()[d];
        }
        if (rec.offset_bytes > std::numeric_limits<std::uint64_t>::max() - array.byte_size()) {
            throw Overflow("packed size overflows 64 bits");
        }
        cursor = rec.offset_bytes + array.byte_size();
        layout.records.push_back(rec);
    }
    layout.total_bytes = round_up(cursor, alignment_bytes);
    return layout;
}

std::vector<std::byte> serialize_layout_header(const LayoutDescriptor& layout) {
    std::vector<std::byte> out;
    out.reserve((1 + kWordsPerRecord * layout.records.size()) * 8);
    put_word(out, layout.records.size());
    for (const LayoutRecord& rec : layout.records) {
        put_word(out, rec.offset_bytes);
        put_word(out, static_cast<std::uint64_t>(rec.element_type));
        put_word(out, rec.rank);
        for (std::size_t d = 0; d < kMaxRank; ++d) {
            put_word(out, rec.dims[d]);
        }
    }
    return out;
}

LayoutDescriptor parse_layout_header(std::span<const std::byte> bytes) {
    if (bytes.size() < 8 || bytes.size() % 8 != 0) {
        throw MalformedHeader("header length " + std::to_string(bytes.size()) +
                              " is not a whole number of 64-bit words");
    }
    const std::uint64_t count = get_word(bytes, 0);
    const std::uint64_t expected = (1 + kWordsPerRecord * count) * 8;
    if (bytes.size() != expected) {
        throw MalformedHeader("header declares " + std::to_string(count) + " arrays (" +
                              std::to_string(expected) + " bytes) but is " +
                              std::to_string(bytes.size()) + " bytes long");
    }

    LayoutDescriptor layout;
    layout.records.reserve(count);
    std::uint64_t alignment = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t base = 1 + kWordsPerRecord * i;
        LayoutRecord rec;
        rec.offset_bytes = get_word(bytes, base);
        const std::uint64_t type_code = get_word(bytes, base + 1);
        if (!is_valid_element_type(type_code)) {
            throw MalformedHeader("record " + std::to_string(i) + " has unknown element type code " +
                                  std::to_string(type_code));
        }
        rec.element_type = static_cast<ElementType>(type_code);
        const std::uint64_t rank = get_word(bytes, base + 2);
        if (rank == 0 || rank > kMaxRank) {
            throw MalformedHeader("record " + std::to_string(i) + " has rank " +
                                  std::to_string(rank));
        }
        rec.rank = static_cast<std::uint32_t>(rank);
        for (std::size_t d = 0; d < kMaxRank; ++d) {
            rec.dims[d] = get_word(bytes, base + 3 + d);
            if (rec.dims[d] == 0 || (d >= rank && rec.dims[d] != 1)) {
                throw MalformedHeader("record " + std::to_string(i) + " has invalid dim " +
                                      std::to_string(rec.dims[d]) + " at axis " + std::to_string(d));
            }
        }
        alignment |= rec.offset_bytes;
        layout.records.push_back(rec);
    }

    // Recover packing metadata: tight total, coarsest alignment consistent
    // with every offset.
    layout.alignment_bytes = alignment == 0 ? 1 : (alignment & ~(alignment - 1));
    layout.total_bytes = layout.records.empty() ? 0 : layout.records.back().end_offset();
    return layout;
}

}  // namespace hetreco
