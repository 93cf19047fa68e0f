#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace msqg {

// ---------------------------------------------------------------------------
// Error types surfaced through module contracts. The CLI maps these to exit
// codes; tests assert on the concrete type.
// ---------------------------------------------------------------------------
struct NonPositiveBase : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroStages : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GeometryUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OutsideBall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NegativePowerOnMean : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BandExceedsGrid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSolenoidal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientHistory : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CFLViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingTimeHalo : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Deterministic counter-based randomness. Every draw is a pure function of a
// 256-bit key tuple, so path/mode/step work can be scheduled on any number of
// workers and still reproduce bit-identically.
// ---------------------------------------------------------------------------
std::uint64_t mix64(std::uint64_t x);
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c);

/// Uniform double in (0,1); never returns 0 or 1.
double uniform01(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                 std::uint64_t c);

/// Standard normal via Box-Muller on two counter-hash uniforms.
double gaussian(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                std::uint64_t c);

// ---------------------------------------------------------------------------
// Fixed-partition worker pool. Items are split into `workers` contiguous
// chunks; each item writes only its own slot, so results do not depend on the
// worker count.
// ---------------------------------------------------------------------------
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

unsigned resolve_workers(unsigned requested);

// ---------------------------------------------------------------------------
// Small bounded memo cache keyed by time. Values are pure functions of the
// key, so eviction never changes results, only costs.
// ---------------------------------------------------------------------------
template <class V>
class LruCache {
  public:
    explicit LruCache(std::size_t cap = 24) : cap_(cap) {}

    std::optional<V> get(double k) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(k);
        if (it == map_.end()) return std::nullopt;
        it->second.second = ++tick_;
        return it->second.first;
    }

    void put(double k, V v) {
        std::lock_guard<std::mutex> lock(mu_);
        map_[k] = {std::move(v), ++tick_};
        while (map_.size() > cap_) {
            auto victim = map_.begin();
            for (auto it = map_.begin(); it != map_.end(); ++it)
                if (it->second.second < victim->second.second) victim = it;
            map_.erase(victim);
        }
    }

  private:
    std::size_t cap_;
    std::map<double, std::pair<V, std::uint64_t>> map_;
    std::uint64_t tick_ = 0;
    std::mutex mu_;
};

}  // namespace msqg
