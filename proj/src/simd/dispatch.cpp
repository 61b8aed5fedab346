#include <atomic>
#include <stdexcept>
#include <string>

#include "fcgtrack/simd.hpp"

namespace fcgtrack::simd {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return "scalar";
        case Isa::kAvx2: return "avx2";
    }
    return "?";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::kScalar: return true;
        case Isa::kAvx2:
#if defined(FCGTRACK_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() { return isa_supported(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

namespace {

const KernelTable& table_for(Isa isa) {
#if defined(FCGTRACK_HAVE_AVX2)
    if (isa == Isa::kAvx2) return avx2_kernels();
#endif
    (void)isa;
    return scalar_kernels();
}

std::atomic<const KernelTable*>& active_table() {
    static std::atomic<const KernelTable*> table{&table_for(detect_isa())};
    return table;
}

}  // namespace

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

Isa active_isa() { return kernels().isa; }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("SIMD variant '" + std::string(to_string(isa)) +
                                    "' is not supported on this CPU");
    }
    active_table().store(&table_for(isa), std::memory_order_release);
}

}  // namespace fcgtrack::simd
