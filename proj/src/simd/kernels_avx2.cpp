// Compiled with -mavx2 -mfma. Only reached through the dispatch table after
// the CPU has been checked.

#include <immintrin.h>

#include "fcgtrack/simd.hpp"

namespace fcgtrack::simd {
namespace {

inline double hsum(__m256 v) {
    const __m128 lo = _mm256_castps256_ps128(v);
    const __m128 hi = _mm256_extractf128_ps(v, 1);
    const __m256d wide = _mm256_add_pd(_mm256_cvtps_pd(lo), _mm256_cvtps_pd(hi));
    const __m128d pair = _mm_add_pd(_mm256_castpd256_pd128(wide), _mm256_extractf128_pd(wide, 1));
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const float* a, const float* b, std::size_t n) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
        acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    }
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    }
    double acc = hsum(_mm256_add_ps(acc0, acc1));
    for (; i < n; ++i) acc += static_cast<double>(a[i]) * b[i];
    return acc;
}

DotNorms dot_norms_avx2(const float* a, const float* b, std::size_t n) {
    __m256 ab = _mm256_setzero_ps();
    __m256 aa = _mm256_setzero_ps();
    __m256 bb = _mm256_setzero_ps();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 x = _mm256_loadu_ps(a + i);
        const __m256 y = _mm256_loadu_ps(b + i);
        ab = _mm256_fmadd_ps(x, y, ab);
        aa = _mm256_fmadd_ps(x, x, aa);
        bb = _mm256_fmadd_ps(y, y, bb);
    }
    DotNorms r{hsum(ab), hsum(aa), hsum(bb)};
    for (; i < n; ++i) {
        const double x = a[i];
        const double y = b[i];
        r.ab += x * y;
        r.aa += x * x;
        r.bb += y * y;
    }
    return r;
}

void axpby_avx2(float alpha, const float* x, float beta, const float* y, float* out,
                std::size_t n) {
    const __m256 va = _mm256_set1_ps(alpha);
    const __m256 vb = _mm256_set1_ps(beta);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 r = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i),
                                         _mm256_mul_ps(vb, _mm256_loadu_ps(y + i)));
        _mm256_storeu_ps(out + i, r);
    }
    for (; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void scale_avx2(float s, float* x, std::size_t n) {
    const __m256 vs = _mm256_set1_ps(s);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_mul_ps(vs, _mm256_loadu_ps(x + i)));
    for (; i < n; ++i) x[i] *= s;
}

}  // namespace

const KernelTable& avx2_kernels() {
    static const KernelTable table{Isa::kAvx2, dot_avx2, dot_norms_avx2, axpby_avx2, scale_avx2};
    return table;
}

}  // namespace fcgtrack::simd
