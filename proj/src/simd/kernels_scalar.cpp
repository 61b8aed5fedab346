#include "fcgtrack/simd.hpp"

namespace fcgtrack::simd {
namespace {

double dot_scalar(const float* a, const float* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * b[i];
    return acc;
}

DotNorms dot_norms_scalar(const float* a, const float* b, std::size_t n) {
    DotNorms r;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a[i];
        const double y = b[i];
        r.ab += x * y;
        r.aa += x * x;
        r.bb += y * y;
    }
    return r;
}

void axpby_scalar(float alpha, const float* x, float beta, const float* y, float* out,
                  std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = alpha * x[i] + beta * y[i];
}

void scale_scalar(float s, float* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::kScalar, dot_scalar, dot_norms_scalar, axpby_scalar,
                                   scale_scalar};
    return table;
}

}  // namespace fcgtrack::simd
