#pragma once
/*
 * Kernel-side ABI.
 *
 * A kernel is a plain function executed over a 1-D global index space with a
 * fixed argument convention: one input data buffer, its layout header, one
 * output data buffer, its layout header, and an opaque parameter block. The
 * layout header is the packed little-endian u64 word sequence produced by
 * hetreco::serialize_layout_header; the helpers below decode it so kernels
 * can locate each array inside a heterogeneous buffer without host help.
 *
 * This header is consumed in two ways: compiled into the library together
 * with the builtin kernel sources, and prepended verbatim to source kernels
 * handed to a JIT backend (which defines HETRECO_JIT_COMPILE and supplies
 * hetreco_register_kernel). Hosts are assumed little-endian, so the header
 * buffer can be read directly as u64 words.
 */

#include <math.h>
#include <stdint.h>
#include <string.h>

typedef struct hetreco_kernel_args {
    const void* in;
    const uint64_t* in_layout;
    void* out;
    const uint64_t* out_layout;
    const void* params;
    uint64_t params_size;
} hetreco_kernel_args;

typedef void (*hetreco_kernel_fn)(const hetreco_kernel_args* args, uint64_t gid,
                                  uint64_t gsize);

/* Element type codes; values match the layout header wire format. */
#define HETRECO_UINT8 1
#define HETRECO_INT32 2
#define HETRECO_FLOAT32 3
#define HETRECO_COMPLEX64 4
#define HETRECO_FLOAT64 5
#define HETRECO_COMPLEX128 6

static inline uint64_t hetreco_element_size(uint64_t type_code) {
    switch (type_code) {
        case HETRECO_UINT8: return 1;
        case HETRECO_INT32: return 4;
        case HETRECO_FLOAT32: return 4;
        case HETRECO_COMPLEX64: return 8;
        case HETRECO_FLOAT64: return 8;
        case HETRECO_COMPLEX128: return 16;
        default: return 0;
    }
}

/* Layout header decoding: word 0 is the array count, followed by one
 * 11-word record per array [offset, type, rank, d0..d7]. */
static inline uint64_t hetreco_layout_count(const uint64_t* h) { return h[0]; }
static inline uint64_t hetreco_layout_offset(const uint64_t* h, uint64_t i) {
    return h[1 + 11 * i + 0];
}
static inline uint64_t hetreco_layout_type(const uint64_t* h, uint64_t i) {
    return h[1 + 11 * i + 1];
}
static inline uint64_t hetreco_layout_rank(const uint64_t* h, uint64_t i) {
    return h[1 + 11 * i + 2];
}
static inline uint64_t hetreco_layout_dim(const uint64_t* h, uint64_t i, uint64_t d) {
    return h[1 + 11 * i + 3 + d];
}
static inline uint64_t hetreco_layout_elements(const uint64_t* h, uint64_t i) {
    uint64_t n = 1;
    for (uint64_t d = 0; d < 8; ++d) n *= hetreco_layout_dim(h, i, d);
    return n;
}

static inline const void* hetreco_array_in(const hetreco_kernel_args* args, uint64_t i) {
    return (const char*)args->in + hetreco_layout_offset(args->in_layout, i);
}
static inline void* hetreco_array_out(const hetreco_kernel_args* args, uint64_t i) {
    return (char*)args->out + hetreco_layout_offset(args->out_layout, i);
}

/* Parameter blocks are packed little-endian bytes; reads are unaligned-safe. */
static inline uint32_t hetreco_param_u32(const hetreco_kernel_args* args, uint64_t off) {
    uint32_t v;
    memcpy(&v, (const char*)args->params + off, sizeof v);
    return v;
}
static inline uint64_t hetreco_param_u64(const hetreco_kernel_args* args, uint64_t off) {
    uint64_t v;
    memcpy(&v, (const char*)args->params + off, sizeof v);
    return v;
}
static inline float hetreco_param_f32(const hetreco_kernel_args* args, uint64_t off) {
    float v;
    memcpy(&v, (const char*)args->params + off, sizeof v);
    return v;
}
static inline double hetreco_param_f64(const hetreco_kernel_args* args, uint64_t off) {
    double v;
    memcpy(&v, (const char*)args->params + off, sizeof v);
    return v;
}

/* Interleaved single-precision complex, the COMPLEX64 in-memory form. */
typedef struct hetreco_cfloat {
    float re;
    float im;
} hetreco_cfloat;

static inline hetreco_cfloat hetreco_cmake(float re, float im) {
    hetreco_cfloat c;
    c.re = re;
    c.im = im;
    return c;
}
static inline hetreco_cfloat hetreco_cadd(hetreco_cfloat a, hetreco_cfloat b) {
    return hetreco_cmake(a.re + b.re, a.im + b.im);
}
static inline hetreco_cfloat hetreco_csub(hetreco_cfloat a, hetreco_cfloat b) {
    return hetreco_cmake(a.re - b.re, a.im - b.im);
}
static inline hetreco_cfloat hetreco_cmul(hetreco_cfloat a, hetreco_cfloat b) {
    return hetreco_cmake(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
static inline hetreco_cfloat hetreco_conjf(hetreco_cfloat a) {
    return hetreco_cmake(a.re, -a.im);
}
static inline float hetreco_cabs2(hetreco_cfloat a) { return a.re * a.re + a.im * a.im; }

/*
 * HETRECO_KERNEL(name) introduces a kernel with the fixed signature. Inside
 * the library the builtin sources are included into a single translation
 * unit that lists them in an explicit table, so the macro only declares the
 * function. Under HETRECO_JIT_COMPILE each kernel additionally registers
 * itself into the unit's kernel table at load time.
 */
#if defined(HETRECO_JIT_COMPILE)
#define HETRECO_KERNEL(kname)                                                       \
    static void hetreco_kernel_##kname(const hetreco_kernel_args* args,            \
                                       uint64_t gid, uint64_t gsize);              \
    [[maybe_unused]] static const int hetreco_reg_##kname =                        \
        hetreco_register_kernel(#kname, &hetreco_kernel_##kname);                  \
    static void hetreco_kernel_##kname(const hetreco_kernel_args* args,            \
                                       uint64_t gid, uint64_t gsize)
#else
#define HETRECO_KERNEL(kname)                                                       \
    static void hetreco_kernel_##kname(const hetreco_kernel_args* args,            \
                                       uint64_t gid, uint64_t gsize)
#endif
