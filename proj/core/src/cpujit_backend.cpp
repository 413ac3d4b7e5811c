// CPU JIT backend: compiles kernel source units with the host C++ toolchain
// into shared objects and runs them in-process. Exercises the full source
// path (preamble injection, per-unit build logs, load-time registration)
// without requiring a dedicated device runtime.

#include <dlfcn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "backend_internal.hpp"

namespace hetreco {
namespace detail {
namespace {

bool command_succeeds(const std::string& command) {
    std::string full = command + " >/dev/null 2>&1";
    int rc = std::system(full.c_str());
    return rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
}

std::string find_host_compiler() {
    std::vector<std::string> candidates;
    if (const char* env = std::getenv("HETRECO_CXX")) candidates.emplace_back(env);
    candidates.insert(candidates.end(), {"c++", "g++", "clang++"});
    for (const std::string& candidate : candidates)
        if (!candidate.empty() && command_succeeds(candidate + " --version")) return candidate;
    return {};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Unit names feed a #line directive; keep them inert inside a string literal.
std::string sanitize_unit_name(std::string name) {
    for (char& c : name)
        if (c == '"' || c == '\\' || c == '\n' || c == '\r') c = '_';
    return name;
}

const std::string& jit_preamble() {
    static const std::string preamble = [] {
        std::string p;
        p += "#define HETRECO_JIT_COMPILE 1\n";
        p += kernel_abi_text();
        p +=
            "\n"
            "static struct hetreco_unit_entry { const char* name; hetreco_kernel_fn fn; }\n"
            "    hetreco_unit_table[64];\n"
            "static unsigned hetreco_unit_table_size = 0;\n"
            "static int hetreco_register_kernel(const char* name, hetreco_kernel_fn fn) {\n"
            "    if (hetreco_unit_table_size < 64u) {\n"
            "        hetreco_unit_table[hetreco_unit_table_size].name = name;\n"
            "        hetreco_unit_table[hetreco_unit_table_size].fn = fn;\n"
            "        ++hetreco_unit_table_size;\n"
            "    }\n"
            "    return 0;\n"
            "}\n"
            "extern \"C\" unsigned hetreco_unit_kernel_count(void) {\n"
            "    return hetreco_unit_table_size;\n"
            "}\n"
            "extern \"C\" const char* hetreco_unit_kernel_name(unsigned i) {\n"
            "    return hetreco_unit_table[i].name;\n"
            "}\n"
            "extern \"C\" hetreco_kernel_fn hetreco_unit_kernel_fn(unsigned i) {\n"
            "    return hetreco_unit_table[i].fn;\n"
            "}\n";
        return p;
    }();
    return preamble;
}

class CpujitBackend final : public CpuBackendBase {
public:
    explicit CpujitBackend(std::string compiler)
        : CpuBackendBase(0), compiler_(std::move(compiler)) {
        char tmpl[] = "/tmp/hetreco-jit-XXXXXX";
        if (char* dir = ::mkdtemp(tmpl)) root_ = dir;
    }

    ~CpujitBackend() override {
        for (void* handle : handles_) ::dlclose(handle);
        if (!root_.empty()) {
            std::error_code ec;
            std::filesystem::remove_all(root_, ec);
        }
    }

    std::string_view id() const override { return "cpujit"; }
    bool supports_source_kernels() const override { return true; }

    std::vector<DeviceDescriptor> devices() const override {
        DeviceDescriptor d;
        d.backend_id = "cpujit";
        d.device_index = 0;
        d.device_type = DeviceType::Cpu;
        d.vendor = "hetreco";
        d.name = "cpujit-cpu";
        d.api_version = "1.2";
        d.global_memory_bytes = detect_physical_memory();
        d.base_alignment_bytes = 256;
        d.supports_source_kernels = true;
        return {d};
    }

    // No intrinsics: every kernel on this backend goes through compile(),
    // so builtins exercise the same path as user programs.
    std::vector<CompiledKernel> intrinsic_kernels() override { return {}; }

    std::vector<CompiledKernel> compile(std::span<const ProgramSource> units) override {
        if (units.empty()) return {};
        std::lock_guard lock(compile_mutex_);
        if (root_.empty()) throw IoError("cannot create JIT work directory under /tmp");

        struct Built {
            std::filesystem::path object;
            std::string unit_name;
        };
        std::vector<Built> built;
        std::vector<BuildDiagnostic> failures;
        for (const ProgramSource& unit : units) {
            std::filesystem::path base = root_ / ("unit_" + std::to_string(next_unit_++));
            std::filesystem::path src = base.string() + ".cpp";
            std::filesystem::path obj = base.string() + ".so";
            std::filesystem::path log = base.string() + ".log";
            {
                std::ofstream out(src, std::ios::binary);
                out << jit_preamble() << "#line 1 \"" << sanitize_unit_name(unit.unit_name)
                    << "\"\n"
                    << unit.source_text;
                if (!out) throw IoError("cannot write JIT source " + src.string());
            }
            std::string cmd = compiler_ + " -std=c++20 -O2 -shared -fPIC -o " + obj.string() +
                              " " + src.string() + " 2> " + log.string();
            int rc = std::system(cmd.c_str());
            bool ok = rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
            if (!ok) {
                failures.push_back({unit.unit_name, read_file(log)});
                continue;
            }
            built.push_back({obj, unit.unit_name});
        }
        if (!failures.empty()) throw CompileError(std::move(failures));

        std::vector<CompiledKernel> kernels;
        for (const Built& b : built) {
            void* handle = ::dlopen(b.object.c_str(), RTLD_NOW | RTLD_LOCAL);
            if (handle == nullptr) {
                const char* err = ::dlerror();
                throw CompileError({{b.unit_name,
                                     std::string("load failed: ") + (err ? err : "dlopen error")}});
            }
            handles_.push_back(handle);
            auto count_fn =
                reinterpret_cast<unsigned (*)()>(::dlsym(handle, "hetreco_unit_kernel_count"));
            auto name_fn = reinterpret_cast<const char* (*)(unsigned)>(
                ::dlsym(handle, "hetreco_unit_kernel_name"));
            auto fn_fn = reinterpret_cast<hetreco_kernel_fn (*)(unsigned)>(
                ::dlsym(handle, "hetreco_unit_kernel_fn"));
            if (count_fn == nullptr || name_fn == nullptr || fn_fn == nullptr)
                throw CompileError({{b.unit_name, "load failed: kernel table symbols missing"}});
            for (unsigned i = 0; i < count_fn(); ++i)
                kernels.push_back({name_fn(i), b.unit_name, fn_fn(i)});
        }
        return kernels;
    }

private:
    std::string compiler_;
    std::filesystem::path root_;
    std::mutex compile_mutex_;
    std::vector<void*> handles_;
    std::uint64_t next_unit_ = 0;
};

}  // namespace
}  // namespace detail

std::unique_ptr<Backend> try_make_cpujit_backend() {
    std::string compiler = detail::find_host_compiler();
    if (compiler.empty()) return nullptr;
    return std::make_unique<detail::CpujitBackend>(std::move(compiler));
}

}  // namespace hetreco
