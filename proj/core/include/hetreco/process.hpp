#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hetreco/session.hpp"

namespace hetreco {

/**
 * Key/value parameters consumed by Process::init. Values are typed; integer
 * values promote to real on read, nothing else coerces. Reading a key with
 * the wrong type throws InvalidParams, reading an absent key yields the
 * caller's fallback.
 */
class ProcessParams {
public:
    using Value = std::variant<bool, std::int64_t, double, std::string>;

    ProcessParams& set(std::string key, bool value);
    ProcessParams& set(std::string key, std::int64_t value);
    ProcessParams& set(std::string key, int value) {
        return set(std::move(key), static_cast<std::int64_t>(value));
    }
    ProcessParams& set(std::string key, double value);
    ProcessParams& set(std::string key, std::string value);
    ProcessParams& set(std::string key, const char* value) {
        return set(std::move(key), std::string(value));
    }

    bool has(std::string_view key) const;
    bool get_bool(std::string_view key, bool fallback) const;
    std::int64_t get_int(std::string_view key, std::int64_t fallback) const;
    double get_real(std::string_view key, double fallback) const;
    std::string get_string(std::string_view key, std::string_view fallback) const;

    /// Rejects any key outside the given set with InvalidParams; processes
    /// call this first so typos fail loudly instead of silently defaulting.
    void require_known(std::initializer_list<std::string_view> known) const;

    std::size_t size() const { return values_.size(); }

private:
    const Value* lookup(std::string_view key) const;

    std::map<std::string, Value, std::less<>> values_;
};

/// Run statistics of one process.
struct LaunchStats {
    std::uint64_t init_calls = 0;
    std::uint64_t launches = 0;
    double last_launch_seconds = 0.0;
    double total_launch_seconds = 0.0;

    double mean_launch_seconds() const {
        return launches == 0 ? 0.0 : total_launch_seconds / static_cast<double>(launches);
    }
};

enum class ProcessState { Created, Initialized };

/**
 * An operation on registered data with a two-phase lifecycle: init() bakes
 * everything derivable from parameters and input/output shapes (validation,
 * plans, twiddle tables, internal allocations), then launch() replays the
 * baked work on the device, any number of times, without further host
 * involvement. Handles must be set before init; shapes are frozen from then
 * on.
 */
class Process {
public:
    Process(ComputeSession& session, std::string name);
    virtual ~Process() = default;

    Process(const Process&) = delete;
    Process& operator=(const Process&) = delete;

    const std::string& name() const { return name_; }
    ComputeSession& session() { return session_; }
    ProcessState state() const { return state_; }
    const LaunchStats& stats() const { return stats_; }

    void set_input(DataHandle handle);
    void set_output(DataHandle handle);
    DataHandle input() const { return input_; }
    DataHandle output() const { return output_; }

    void init(const ProcessParams& params = {});
    void launch();

protected:
    virtual void on_init(const ProcessParams& params) = 0;
    virtual void on_launch() = 0;

    DataHandle require_input() const;
    DataHandle require_output() const;
    const LayoutDescriptor& input_layout() const { return session_.layout_of(require_input()); }
    const LayoutDescriptor& output_layout() const { return session_.layout_of(require_output()); }

private:
    ComputeSession& session_;
    std::string name_;
    ProcessState state_ = ProcessState::Created;
    DataHandle input_;
    DataHandle output_;
    LaunchStats stats_;
};

/**
 * A pipeline of initialized processes executing back to back on the device.
 * Construction verifies that each stage consumes exactly the data set the
 * previous stage produces — the zero-copy guarantee: intermediates stay on
 * the device, only handles change hands. Stage failures surface as
 * ChainStageError carrying the stage index.
 */
class CompositeProcess : public Process {
public:
    CompositeProcess(ComputeSession& session, std::string name,
                     std::vector<std::unique_ptr<Process>> stages);

    std::size_t stage_count() const { return stages_.size(); }
    Process& stage(std::size_t index) { return *stages_.at(index); }

protected:
    void on_init(const ProcessParams& params) override;
    void on_launch() override;

private:
    std::vector<std::unique_ptr<Process>> stages_;
};

/// Convenience builder for CompositeProcess.
std::unique_ptr<CompositeProcess> chain(ComputeSession& session, std::string name,
                                        std::vector<std::unique_ptr<Process>> stages);

}  // namespace hetreco
