// Builtin kernels, compiled into the library. The same .cl.src files are
// embedded as text for source-capable backends; here they are included into
// one translation unit and exposed through an explicit table, which keeps
// them alive under static linking without relying on self-registration.

#include "hetreco/kernel_abi.h"

#include "complex_element_prod.cl.src"
#include "fft_radix2_pass.cl.src"
#include "matrix_add.cl.src"
#include "negate.cl.src"
#include "rss_combine.cl.src"
#include "ximage_sum.cl.src"

#include "backend_internal.hpp"

namespace hetreco::detail {

std::vector<CompiledKernel> reference_intrinsics() {
    auto builtin = [](const char* name, hetreco_kernel_fn fn) {
        return CompiledKernel{name, std::string("builtin:") + name, fn};
    };
    return {
        builtin("negate", &hetreco_kernel_negate),
        builtin("fft_radix2_pass", &hetreco_kernel_fft_radix2_pass),
        builtin("complex_element_prod", &hetreco_kernel_complex_element_prod),
        builtin("ximage_sum", &hetreco_kernel_ximage_sum),
        builtin("rss_combine", &hetreco_kernel_rss_combine),
        builtin("matrix_add", &hetreco_kernel_matrix_add),
    };
}

}  // namespace hetreco::detail
