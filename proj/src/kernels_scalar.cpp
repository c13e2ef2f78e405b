// Reference kernels. Plain loops, no tricks: these define what the SIMD variants must match.
#include "fockbit/kernels.hpp"

namespace fockbit::kern::scalar {

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(cplx a, cplx* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void scal_copy(cplx a, const cplx* src, cplx* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a * src[i];
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

void rot2(cplx a00, cplx a01, cplx a10, cplx a11, cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const cplx xi = x[i];
        const cplx yi = y[i];
        x[i] = a00 * xi + a01 * yi;
        y[i] = a10 * xi + a11 * yi;
    }
}

} // namespace fockbit::kern::scalar
