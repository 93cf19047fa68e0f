#include "util.hpp"

#include <cmath>

namespace msqg {

std::uint64_t mix64(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9E3779B97f4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (a + 0x1000000001B3ull));
    h = mix64(h ^ (b + 0xCBF29CE484222325ull));
    h = mix64(h ^ (c + 0x100000001B3ull));
    return h;
}

double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                 std::uint64_t c) {
    const std::uint64_t bits = counter_hash(seed, a, b, c);
    // 53-bit mantissa, strictly inside (0,1)
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double gaussian(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                std::uint64_t c) {
    const double u1 = uniform01(seed, a, b, 2 * c);
    const double u2 = uniform01(seed, a, b, 2 * c + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    workers = std::max(1u, workers);
    if (workers == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::size_t(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace msqg
