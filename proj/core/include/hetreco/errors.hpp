#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hetreco {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- device selection ------------------------------------------------------

/// A device filter could not be built (e.g. malformed version string).
class InvalidFilter : public Error {
public:
    using Error::Error;
};

/// No enumerated device satisfies the filter. The message lists the filter
/// and every candidate that was considered.
class NoMatchingDevice : public Error {
public:
    using Error::Error;
};

// ---- arrays and layout -----------------------------------------------------

/// A value-type invariant was violated at construction (rank, dims, payload size).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A data set with no arrays was passed where at least one is required.
class EmptyData : public Error {
public:
    using Error::Error;
};

/// Packed sizes exceed the representable range.
class Overflow : public Error {
public:
    using Error::Error;
};

/// A serialized layout header failed validation.
class MalformedHeader : public Error {
public:
    using Error::Error;
};

// ---- session ----------------------------------------------------------------

/// The device could not satisfy an allocation request.
class AllocationFailure : public Error {
public:
    using Error::Error;
};

/// The handle is not (or no longer) registered in this session.
class UnknownHandle : public Error {
public:
    using Error::Error;
};

/// A kernel failed during execution; carries the kernel name.
class DeviceError : public Error {
public:
    DeviceError(std::string kernel_name, const std::string& message)
        : Error("device error in kernel '" + kernel_name + "': " + message),
          kernel_name_(std::move(kernel_name)) {}

    const std::string& kernel_name() const { return kernel_name_; }

private:
    std::string kernel_name_;
};

// ---- kernel loading ----------------------------------------------------------

/// Verbatim build output of one program unit.
struct BuildDiagnostic {
    std::string unit_name;
    std::string log;
};

/// One or more program units failed to build. The message embeds every unit's
/// build log verbatim; diagnostics() gives structured access.
class CompileError : public Error {
public:
    explicit CompileError(std::vector<BuildDiagnostic> diagnostics)
        : Error(format_message(diagnostics)), diagnostics_(std::move(diagnostics)) {}

    const std::vector<BuildDiagnostic>& diagnostics() const { return diagnostics_; }

private:
    static std::string format_message(const std::vector<BuildDiagnostic>& diags) {
        std::string msg = "kernel compilation failed";
        for (const auto& d : diags) {
            msg += "\n--- unit '" + d.unit_name + "' ---\n" + d.log;
        }
        return msg;
    }

    std::vector<BuildDiagnostic> diagnostics_;
};

/// Two program units export the same kernel name.
class DuplicateKernel : public Error {
public:
    using Error::Error;
};

/// Source text was handed to a backend that cannot compile it and has no
/// intrinsic of that name.
class UnsupportedSource : public Error {
public:
    using Error::Error;
};

/// Lookup of a kernel name that no successful load has provided.
class UnknownKernel : public Error {
public:
    using Error::Error;
};

// ---- processes ----------------------------------------------------------------

/// A process rejected its parameters (unknown key, wrong type, bad value).
class InvalidParams : public Error {
public:
    using Error::Error;
};

/// Input/output shapes are incompatible with the operation.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class AlreadyInitialized : public Error {
public:
    using Error::Error;
};

class NotInitialized : public Error {
public:
    using Error::Error;
};

/// Chain construction failed: a stage's input is not the previous stage's output.
class ChainMismatch : public Error {
public:
    using Error::Error;
};

/// A stage of a composite process failed; carries the stage index.
class ChainStageError : public Error {
public:
    ChainStageError(std::size_t stage_index, const std::string& stage_name,
                    const std::string& message)
        : Error("stage " + std::to_string(stage_index) + " (" + stage_name + "): " + message),
          stage_index_(stage_index) {}

    std::size_t stage_index() const { return stage_index_; }

private:
    std::size_t stage_index_;
};

// ---- ops -----------------------------------------------------------------------

class UnsupportedElementType : public Error {
public:
    using Error::Error;
};

// ---- file I/O ---------------------------------------------------------------------

class IoError : public Error {
public:
    using Error::Error;
};

class MalformedFile : public Error {
public:
    using Error::Error;
};

/// The file is recognized but uses a feature outside the supported subset.
/// feature() names the offending feature ("compression", "big-endian", ...).
class UnsupportedFeature : public Error {
public:
    UnsupportedFeature(std::string feature, const std::string& detail)
        : Error("unsupported feature: " + feature + (detail.empty() ? "" : " (" + detail + ")")),
          feature_(std::move(feature)) {}

    const std::string& feature() const { return feature_; }

private:
    std::string feature_;
};

/// Raw payload length disagrees with its sidecar description.
class SizeMismatch : public Error {
public:
    using Error::Error;
};

class MalformedSidecar : public Error {
public:
    using Error::Error;
};

}  // namespace hetreco
