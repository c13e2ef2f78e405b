// AVX2+FMA kernels. A __m256d holds two complex doubles as [re0, im0, re1, im1]; the
// complex product (ar+i*ai)(br+i*bi) comes out of one fmaddsub after splitting the left
// factor into duplicated real/imag parts:
//   fmaddsub(dup_re(a), b, dup_im(a) * swap(b))
//     even lane: ar*br - ai*bi,  odd lane: ar*bi + ai*br.
// The conjugated product swaps the add/sub pattern (fmsubadd). Tails below a full vector
// run through the scalar reference kernels.
#include "fockbit/kernels.hpp"

#if defined(FOCKBIT_HAVE_AVX2)

#include <immintrin.h>

namespace fockbit::kern::avx2 {

namespace {

inline const double* dptr(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dptr(cplx* p) { return reinterpret_cast<double*>(p); }

// [re, im, re, im] broadcast of one complex scalar, split into duplicated parts.
struct SplitScalar {
    __m256d re;
    __m256d im;
    explicit SplitScalar(cplx a) : re(_mm256_set1_pd(a.real())), im(_mm256_set1_pd(a.imag())) {}
};

// a * v for packed complex v.
inline __m256d cmul(const SplitScalar& a, __m256d v) {
    const __m256d vswap = _mm256_permute_pd(v, 0x5);
    return _mm256_fmaddsub_pd(a.re, v, _mm256_mul_pd(a.im, vswap));
}

} // namespace

bool supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const SplitScalar s(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(dptr(x + i));
        const __m256d yv = _mm256_loadu_pd(dptr(y + i));
        _mm256_storeu_pd(dptr(y + i), _mm256_add_pd(yv, cmul(s, xv)));
    }
    scalar::axpy(a, x + i, y + i, n - i);
}

void scal(cplx a, cplx* x, std::size_t n) {
    const SplitScalar s(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(dptr(x + i));
        _mm256_storeu_pd(dptr(x + i), cmul(s, xv));
    }
    scalar::scal(a, x + i, n - i);
}

void scal_copy(cplx a, const cplx* src, cplx* dst, std::size_t n) {
    const SplitScalar s(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(dptr(src + i));
        _mm256_storeu_pd(dptr(dst + i), cmul(s, v));
    }
    scalar::scal_copy(a, src + i, dst + i, n - i);
}

cplx dotc(const cplx* x, const cplx* y, std::size_t n) {
    // conj(x)*y: even lanes xr*yr + xi*yi, odd lanes xr*yi - xi*yr -> fmsubadd.
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(dptr(x + i));
        const __m256d y0 = _mm256_loadu_pd(dptr(y + i));
        const __m256d x1 = _mm256_loadu_pd(dptr(x + i + 2));
        const __m256d y1 = _mm256_loadu_pd(dptr(y + i + 2));
        acc0 = _mm256_add_pd(acc0, _mm256_fmsubadd_pd(_mm256_movedup_pd(x0), y0,
                   _mm256_mul_pd(_mm256_permute_pd(x0, 0xF), _mm256_permute_pd(y0, 0x5))));
        acc1 = _mm256_add_pd(acc1, _mm256_fmsubadd_pd(_mm256_movedup_pd(x1), y1,
                   _mm256_mul_pd(_mm256_permute_pd(x1, 0xF), _mm256_permute_pd(y1, 0x5))));
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(dptr(x + i));
        const __m256d yv = _mm256_loadu_pd(dptr(y + i));
        acc0 = _mm256_add_pd(acc0, _mm256_fmsubadd_pd(_mm256_movedup_pd(xv), yv,
                   _mm256_mul_pd(_mm256_permute_pd(xv, 0xF), _mm256_permute_pd(yv, 0x5))));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    cplx acc(lanes[0] + lanes[2], lanes[1] + lanes[3]);
    return acc + scalar::dotc(x + i, y + i, n - i);
}

void rot2(cplx a00, cplx a01, cplx a10, cplx a11, cplx* x, cplx* y, std::size_t n) {
    const SplitScalar s00(a00), s01(a01), s10(a10), s11(a11);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(dptr(x + i));
        const __m256d yv = _mm256_loadu_pd(dptr(y + i));
        const __m256d nx = _mm256_add_pd(cmul(s00, xv), cmul(s01, yv));
        const __m256d ny = _mm256_add_pd(cmul(s10, xv), cmul(s11, yv));
        _mm256_storeu_pd(dptr(x + i), nx);
        _mm256_storeu_pd(dptr(y + i), ny);
    }
    scalar::rot2(a00, a01, a10, a11, x + i, y + i, n - i);
}

} // namespace fockbit::kern::avx2

#endif // FOCKBIT_HAVE_AVX2
