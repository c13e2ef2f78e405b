// Runtime backend selection. The table is resolved once (thread-safe local static) from
// CPU capabilities, with FOCKBIT_KERNELS=scalar|avx2|auto as an override hook.
#include "fockbit/kernels.hpp"

#include <cstdlib>
#include <string>

#include "fockbit/errors.hpp"

namespace fockbit::kern {

namespace {

struct DispatchTable {
    void (*axpy)(cplx, const cplx*, cplx*, std::size_t) = nullptr;
    void (*scal)(cplx, cplx*, std::size_t) = nullptr;
    void (*scal_copy)(cplx, const cplx*, cplx*, std::size_t) = nullptr;
    cplx (*dotc)(const cplx*, const cplx*, std::size_t) = nullptr;
    void (*rot2)(cplx, cplx, cplx, cplx, cplx*, cplx*, std::size_t) = nullptr;
    const char* name = "";
};

DispatchTable scalar_table() {
    return {scalar::axpy, scalar::scal, scalar::scal_copy, scalar::dotc, scalar::rot2, "scalar"};
}

#if defined(FOCKBIT_HAVE_AVX2)
DispatchTable avx2_table() {
    return {avx2::axpy, avx2::scal, avx2::scal_copy, avx2::dotc, avx2::rot2, "avx2"};
}
#endif

bool avx2_available() {
#if defined(FOCKBIT_HAVE_AVX2)
    return avx2::supported();
#else
    return false;
#endif
}

DispatchTable select(std::string_view request) {
    if (request == "scalar") return scalar_table();
#if defined(FOCKBIT_HAVE_AVX2)
    if (request == "avx2") {
        if (!avx2_available())
            throw ValidationError("kernel backend 'avx2' not supported on this CPU");
        return avx2_table();
    }
#else
    if (request == "avx2")
        throw ValidationError("kernel backend 'avx2' not built into this binary");
#endif
    if (request == "auto") {
#if defined(FOCKBIT_HAVE_AVX2)
        if (avx2_available()) return avx2_table();
#endif
        return scalar_table();
    }
    throw ValidationError("unknown kernel backend '" + std::string(request) +
                          "' (expected scalar, avx2, or auto)");
}

DispatchTable& table() {
    static DispatchTable t = [] {
        const char* env = std::getenv("FOCKBIT_KERNELS");
        return select(env && *env ? std::string_view(env) : std::string_view("auto"));
    }();
    return t;
}

} // namespace

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) { table().axpy(a, x, y, n); }
void scal(cplx a, cplx* x, std::size_t n) { table().scal(a, x, n); }
void scal_copy(cplx a, const cplx* src, cplx* dst, std::size_t n) {
    table().scal_copy(a, src, dst, n);
}
cplx dotc(const cplx* x, const cplx* y, std::size_t n) { return table().dotc(x, y, n); }
void rot2(cplx a00, cplx a01, cplx a10, cplx a11, cplx* x, cplx* y, std::size_t n) {
    table().rot2(a00, a01, a10, a11, x, y, n);
}

std::string_view active_backend() { return table().name; }

void force_backend(std::string_view name) { table() = select(name); }

} // namespace fockbit::kern
