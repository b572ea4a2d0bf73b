#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "vibrotag/kernels.hpp"

namespace vibrotag::kernels {

namespace {

constexpr Table kScalar{Backend::Scalar,      scalar::first_difference, scalar::rms_envelope,
                        scalar::min_max,      scalar::normalize,        scalar::dtw_row_abs,
                        scalar::dtw_row_sq};

#if defined(VIBROTAG_HAVE_AVX2)
constexpr Table kAvx2{Backend::Avx2,      avx2::first_difference, avx2::rms_envelope,
                      avx2::min_max,      avx2::normalize,        avx2::dtw_row_abs,
                      avx2::dtw_row_sq};
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
constexpr Table kNeon{Backend::Neon,      neon::first_difference, neon::rms_envelope,
                      neon::min_max,      neon::normalize,        neon::dtw_row_abs,
                      neon::dtw_row_sq};
#endif

const Table* table_for(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return &kScalar;
        case Backend::Avx2: return cpu_supports(b) ? avx2_table() : nullptr;
        case Backend::Neon: return cpu_supports(b) ? neon_table() : nullptr;
    }
    return nullptr;
}

const Table* initial_table() noexcept {
    if (const char* env = std::getenv("VIBROTAG_SIMD")) {
        Backend b{};
        if (parse_backend(env, b))
            if (const Table* t = table_for(b)) return t;
    }
    if (const Table* t = table_for(Backend::Avx2)) return t;
    if (const Table* t = table_for(Backend::Neon)) return t;
    return &kScalar;
}

std::atomic<const Table*> g_active{nullptr};

}  // namespace

const Table& scalar_table() noexcept { return kScalar; }

const Table* avx2_table() noexcept {
#if defined(VIBROTAG_HAVE_AVX2)
    return &kAvx2;
#else
    return nullptr;
#endif
}

const Table* neon_table() noexcept {
#if defined(__aarch64__) && defined(__ARM_NEON)
    return &kNeon;
#else
    return nullptr;
#endif
}

bool cpu_supports(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2:
#if defined(VIBROTAG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::Neon: return neon_table() != nullptr;
    }
    return false;
}

const Table& active() noexcept {
    const Table* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        const Table* chosen = initial_table();
        g_active.compare_exchange_strong(t, chosen, std::memory_order_acq_rel);
        return *g_active.load(std::memory_order_acquire);
    }
    return *t;
}

Backend active_backend() noexcept { return active().backend; }

bool set_backend(Backend b) noexcept {
    const Table* t = table_for(b);
    if (t == nullptr) return false;
    g_active.store(t, std::memory_order_release);
    return true;
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon})
        if (table_for(b) != nullptr) out.push_back(b);
    return out;
}

std::string_view to_string(Backend b) noexcept {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

bool parse_backend(std::string_view name, Backend& out) noexcept {
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon})
        if (name == to_string(b)) {
            out = b;
            return true;
        }
    return false;
}

}  // namespace vibrotag::kernels
