#include <atomic>

#include "hardy/error.hpp"
#include "tables.hpp"

namespace hardy::simd {
namespace {

std::atomic<Level>& active_slot() {
    static std::atomic<Level> slot{detected()};
    return slot;
}

void check_lengths(std::size_t a, std::size_t b) {
    require(a == b, ErrorKind::Shape, "simd: length mismatch");
}

}  // namespace

const char* to_string(Level level) {
    switch (level) {
        case Level::Scalar: return "scalar";
        case Level::Avx2: return "avx2";
    }
    return "?";
}

bool supported(Level level) {
    switch (level) {
        case Level::Scalar: return true;
        case Level::Avx2:
#if HARDY_HAVE_AVX2_TABLE
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

Level detected() { return supported(Level::Avx2) ? Level::Avx2 : Level::Scalar; }

Level active() { return active_slot().load(std::memory_order_relaxed); }

void set_active(Level level) {
    require(supported(level), ErrorKind::Unsupported,
            std::string("simd level not supported on this CPU: ") + to_string(level));
    active_slot().store(level, std::memory_order_relaxed);
}

const KernelTable& table(Level level) {
#if HARDY_HAVE_AVX2_TABLE
    if (level == Level::Avx2) {
        require(supported(level), ErrorKind::Unsupported, "avx2 not supported on this CPU");
        return detail::avx2_table;
    }
#endif
    require(level == Level::Scalar, ErrorKind::Unsupported, "simd level not built");
    return detail::scalar_table;
}

namespace {
const KernelTable& current() { return table(active()); }
}  // namespace

cplx weighted_sum(std::span<const double> w, std::span<const cplx> v) {
    check_lengths(w.size(), v.size());
    return current().weighted_sum(w.data(), v.data(), v.size());
}

cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g) {
    check_lengths(w.size(), f.size());
    check_lengths(f.size(), g.size());
    return current().weighted_dot(w.data(), f.data(), g.data(), f.size());
}

double weighted_abs_pow_sum(std::span<const double> w, std::span<const cplx> v, double p) {
    check_lengths(w.size(), v.size());
    return current().weighted_abs_pow_sum(w.data(), v.data(), p, v.size());
}

double weighted_pow_sum_real(std::span<const double> w, std::span<const double> r, double e) {
    check_lengths(w.size(), r.size());
    return current().weighted_pow_sum_real(w.data(), r.data(), e, r.size());
}

double max_abs(std::span<const cplx> v) { return current().max_abs(v.data(), v.size()); }

void axpy(double c, std::span<const cplx> x, std::span<cplx> y) {
    check_lengths(x.size(), y.size());
    current().axpy(c, x.data(), y.data(), x.size());
}

double kernel_power(std::span<const cplx* const> coords, std::span<const cplx> a, int power,
                    std::span<cplx> out) {
    check_lengths(coords.size(), a.size());
    require(coords.size() <= 8, ErrorKind::Parameter, "kernel_power: at most 8 coordinates");
    require(power >= 1, ErrorKind::Parameter, "kernel_power: power must be positive");
    return current().kernel_power(coords.data(), a.data(), a.size(), power, out.size(),
                                  out.data());
}

}  // namespace hardy::simd
