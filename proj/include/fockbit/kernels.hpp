// Low-level complex vector kernels: scalar reference implementations plus AVX2 variants
// selected at run time. Everything above this layer (matrix products, Jacobi sweeps, state
// propagation) is built on these five operations.
//
// Contract notes:
//  * all pointers address std::complex<double> arrays that must not overlap, except that
//    scal() works in place;
//  * the dispatched entry points pick a backend once (first use) from CPU capabilities,
//    overridable with force_backend() or the FOCKBIT_KERNELS environment variable
//    ("scalar" | "avx2" | "auto");
//  * backends may differ in rounding (FMA contraction, vectorized accumulation order), so
//    cross-backend comparisons belong at ~1e-13 relative tolerance, not bitwise.
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace fockbit {

using cplx = std::complex<double>;

namespace kern {

// Scalar reference kernels. These define the semantics; SIMD variants must agree with them
// up to rounding.
namespace scalar {
// y[i] += a * x[i]
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
// x[i] *= a
void scal(cplx a, cplx* x, std::size_t n);
// dst[i] = a * src[i]
void scal_copy(cplx a, const cplx* src, cplx* dst, std::size_t n);
// sum_i conj(x[i]) * y[i]
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
// simultaneous two-vector rotation:
//   x[i], y[i]  <-  a00*x[i] + a01*y[i],  a10*x[i] + a11*y[i]
void rot2(cplx a00, cplx a01, cplx a10, cplx a11, cplx* x, cplx* y, std::size_t n);
} // namespace scalar

#if defined(FOCKBIT_HAVE_AVX2)
namespace avx2 {
bool supported(); // CPUID check: AVX2 + FMA
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void scal(cplx a, cplx* x, std::size_t n);
void scal_copy(cplx a, const cplx* src, cplx* dst, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
void rot2(cplx a00, cplx a01, cplx a10, cplx a11, cplx* x, cplx* y, std::size_t n);
} // namespace avx2
#endif

// Dispatched entry points.
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);
void scal(cplx a, cplx* x, std::size_t n);
void scal_copy(cplx a, const cplx* src, cplx* dst, std::size_t n);
cplx dotc(const cplx* x, const cplx* y, std::size_t n);
void rot2(cplx a00, cplx a01, cplx a10, cplx a11, cplx* x, cplx* y, std::size_t n);

// Name of the backend currently wired into the dispatch table ("scalar" or "avx2").
std::string_view active_backend();

// Force a backend by name ("scalar", "avx2", "auto"). Throws ValidationError if the request
// names an unavailable backend. Intended for tests and benchmarking.
void force_backend(std::string_view name);

} // namespace kern
} // namespace fockbit
