#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <vector>

#include "hetreco/errors.hpp"

namespace hetreco {

/// Machine element types storable in an NDArray. The numeric codes are part
/// of the layout header wire format and must not change.
enum class ElementType : std::uint64_t {
    UInt8 = 1,
    Int32 = 2,
    Float32 = 3,
    Complex64 = 4,
    Float64 = 5,
    Complex128 = 6,
};

/// Size in bytes of one element of the given type.
std::size_t element_size(ElementType type);

/// True if the code is one of the defined ElementType values.
bool is_valid_element_type(std::uint64_t code);

std::string_view element_type_name(ElementType type);

/// Maps C++ value types onto ElementType codes.
template <typename T>
struct element_type_of;

template <> struct element_type_of<std::uint8_t> {
    static constexpr ElementType value = ElementType::UInt8;
};
template <> struct element_type_of<std::int32_t> {
    static constexpr ElementType value = ElementType::Int32;
};
template <> struct element_type_of<float> {
    static constexpr ElementType value = ElementType::Float32;
};
template <> struct element_type_of<std::complex<float>> {
    static constexpr ElementType value = ElementType::Complex64;
};
template <> struct element_type_of<double> {
    static constexpr ElementType value = ElementType::Float64;
};
template <> struct element_type_of<std::complex<double>> {
    static constexpr ElementType value = ElementType::Complex128;
};

/// Maximum rank of an NDArray. Fixed so layout header records have a
/// constant size and kernels can index them in O(1).
inline constexpr std::size_t kMaxRank = 8;

/**
 * One typed n-dimensional array with contiguous storage.
 *
 * Dimensions are ordered fastest-varying first (column-major), so the
 * element at coordinates (c0, c1, ...) lives at linear index
 * c0 + d0*(c1 + d1*(c2 + ...)). Complex elements are stored as interleaved
 * (re, im) pairs. NDArray is a plain value: immutable shape, freely copyable
 * and movable, no shared state.
 */
class NDArray {
public:
    /// Zero-filled array of the given shape.
    NDArray(ElementType type, std::vector<std::uint64_t> dims);

    /// Takes ownership of a payload; its size must equal the shape's byte size.
    NDArray(ElementType type, std::vector<std::uint64_t> dims, std::vector<std::byte> payload);

    /// Builds an array from typed values; values.size() must equal the element count.
    template <typename T>
    static NDArray from_values(std::vector<std::uint64_t> dims, std::span<const T> values) {
        NDArray a(element_type_of<T>::value, std::move(dims));
        if (values.size() != a.element_count()) {
            throw InvalidArgument("from_values: got " + std::to_string(values.size()) +
                                  " values for " + std::to_string(a.element_count()) +
                                  " elements");
        }
        std::memcpy(a.payload_.data(), values.data(), a.byte_size());
        return a;
    }

    ElementType element_type() const { return type_; }
    const std::vector<std::uint64_t>& dims() const { return dims_; }
    std::size_t rank() const { return dims_.size(); }
    std::uint64_t element_count() const { return element_count_; }
    std::size_t byte_size() const { return payload_.size(); }

    std::span<const std::byte> bytes() const { return payload_; }
    std::span<std::byte> bytes() { return payload_; }

    /// Typed view over the payload; element type must match exactly.
    template <typename T>
    std::span<const T> view() const {
        check_view_type(element_type_of<T>::value);
        return {reinterpret_cast<const T*>(payload_.data()), element_count_};
    }

    template <typename T>
    std::span<T> view() {
        check_view_type(element_type_of<T>::value);
        return {reinterpret_cast<T*>(payload_.data()), element_count_};
    }

    bool operator==(const NDArray& other) const;

private:
    void check_view_type(ElementType requested) const;

    ElementType type_;
    std::vector<std::uint64_t> dims_;
    std::uint64_t element_count_ = 0;
    std::vector<std::byte> payload_;
};

/// Role tag of a data set.
enum class DataKind {
    XData,    ///< data with a direct physical interpretation (images, volumes)
    KData,    ///< frequency-domain acquisition data
    Generic,  ///< anything else
};

std::string_view data_kind_name(DataKind kind);

/**
 * An ordered, possibly heterogeneous collection of arrays that moves between
 * host and device as a single unit. Arrays need not agree in type, rank or
 * dims; a packed layout (see layout.hpp) records where each one lands inside
 * the single device allocation.
 */
struct Data {
    std::vector<NDArray> arrays;
    DataKind kind = DataKind::Generic;

    Data() = default;
    explicit Data(std::vector<NDArray> arrays_, DataKind kind_ = DataKind::Generic)
        : arrays(std::move(arrays_)), kind(kind_) {}

    std::size_t array_count() const { return arrays.size(); }
    bool empty() const { return arrays.empty(); }

    /// Sum of the arrays' payload sizes, without packing padding.
    std::uint64_t payload_byte_size() const;
};

}  // namespace hetreco
