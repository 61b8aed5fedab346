#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Float-vector kernels behind the appearance code. Every kernel has a scalar
// reference implementation; wider variants are selected once at startup from
// what the CPU reports and can be pinned for equivalence testing.

namespace fcgtrack::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view to_string(Isa isa);

struct DotNorms {
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
};

struct KernelTable {
    Isa isa;
    double (*dot)(const float* a, const float* b, std::size_t n);
    DotNorms (*dot_norms)(const float* a, const float* b, std::size_t n);
    // out = alpha * x + beta * y; out may alias x or y.
    void (*axpby)(float alpha, const float* x, float beta, const float* y, float* out,
                  std::size_t n);
    void (*scale)(float s, float* x, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(FCGTRACK_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif

bool isa_supported(Isa isa);

/// Best ISA the running CPU supports.
Isa detect_isa();

/// Kernels in use by the library. Defaults to detect_isa().
const KernelTable& kernels();
Isa active_isa();

/// Pins the kernel table; throws std::invalid_argument if the CPU lacks it.
void set_active_isa(Isa isa);

/// RAII pin, restores the previous ISA on destruction.
class ScopedIsa {
public:
    explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
    ~ScopedIsa() { set_active_isa(previous_); }
    ScopedIsa(const ScopedIsa&) = delete;
    ScopedIsa& operator=(const ScopedIsa&) = delete;

private:
    Isa previous_;
};

inline double dot(std::span<const float> a, std::span<const float> b) {
    return kernels().dot(a.data(), b.data(), a.size());
}

inline DotNorms dot_norms(std::span<const float> a, std::span<const float> b) {
    return kernels().dot_norms(a.data(), b.data(), a.size());
}

inline void axpby(float alpha, std::span<const float> x, float beta, std::span<const float> y,
                  std::span<float> out) {
    kernels().axpby(alpha, x.data(), beta, y.data(), out.data(), out.size());
}

inline void scale(float s, std::span<float> x) { kernels().scale(s, x.data(), x.size()); }

}  // namespace fcgtrack::simd
