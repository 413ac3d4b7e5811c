#include "hetreco/ndarray.hpp"

namespace hetreco {

std::size_t element_size(ElementType type) {
    switch (type) {
        case ElementType::UInt8: return 1;
        case ElementType::Int32: return 4;
        case ElementType::Float32: return 4;
        case ElementType::Complex64: return 8;
        case ElementType::Float64: return 8;
        case ElementType::Complex128: return 16;
    }
    throw InvalidArgument("unknown element type code " +
                          std::to_string(static_cast<std::uint64_t>(type)));
}

bool is_valid_element_type(std::uint64_t code) {
    return code >= 1 && code <= 6;
}

std::string_view element_type_name(ElementType type) {
    switch (type) {
        case ElementType::UInt8: return "uint8";
        case ElementType::Int32: return "int32";
        case ElementType::Float32: return "float32";
        case ElementType::Complex64: return "complex64";
        case ElementType::Float64: return "float64";
        case ElementType::Complex128: return "complex128";
    }
    return "unknown";
}

std::string_view data_kind_name(DataKind kind) {
    switch (kind) {
        case DataKind::XData: return "xdata";
        case DataKind::KData: return "kdata";
        case DataKind::Generic: return "generic";
    }
    return "unknown";
}

namespace {

std::uint64_t checked_element_count(const std::vector<std::uint64_t>& dims) {
    if (dims.empty() || dims.size() > kMaxRank) {
        throw InvalidArgument("array rank must be between 1 and " + std::to_string(kMaxRank) +
                              ", got " + std::to_string(dims.size()));
    }
    std::uint64_t count = 1;
    for (std::uint64_t d : dims) {
        if (d == 0) {
            throw InvalidArgument("array dimensions must be >= 1");
        }
        if (__builtin_mul_overflow(count, d, &count)) {
            throw Overflow("element count overflows 64 bits");
        }
    }
    return count;
}

std::uint64_t checked_byte_size(std::uint64_t count, ElementType type) {
    std::uint64_t bytes = 0;
    if (__builtin_mul_overflow(count, static_cast<std::uint64_t>(element_size(type)), &bytes)) {
        throw Overflow("payload byte size overflows 64 bits");
    }
    return bytes;
}

}  // namespace

NDArray::NDArray(ElementType type, std::vector<std::uint64_t> dims)
    : type_(type), dims_(std::move(dims)) {
    element_count_ = checked_element_count(dims_);
    payload_.resize(checked_byte_size(element_count_, type_));
}

NDArray::NDArray(ElementType type, std::vector<std::uint64_t> dims, std::vector<std::byte> payload)
    : type_(type), dims_(std::move(dims)), payload_(std::move(payload)) {
    element_count_ = checked_element_count(dims_);
    const std::uint64_t expected = checked_byte_size(element_count_, type_);
    if (payload_.size() != expected) {
        throw InvalidArgument("payload is " + std::to_string(payload_.size()) +
                              " bytes, shape requires " + std::to_string(expected));
    }
}

bool NDArray::operator==(const NDArray& other) const {
    return type_ == other.type_ && dims_ == other.dims_ && payload_ == other.payload_;
}

void NDArray::check_view_type(ElementType requested) const {
    if (requested != type_) {
        throw InvalidArgument(std::string("typed view of ") + std::string(element_type_name(type_)) +
                              " array requested as " + std::string(element_type_name(requested)));
    }
}

std::uint64_t Data::payload_byte_size() const {
    std::uint64_t total = 0;
    for (const auto& a : arrays) {
        total += a.byte_size();
    }
    return total;
}

}  // namespace hetreco
