#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "util.hpp"

namespace msqg {

/// Binary container: magic "MSQG1", u32 version, then u64 n (points per axis
/// for fields, mode count for noise paths), u64 component count, u64
/// time-sample count, u64 record points (N*N for fields, mode count for
/// paths), f64 dt, u64 seed, then little-endian f64 payload, row-major,
/// component-major per time index.
struct Checkpoint {
    std::uint64_t n = 0;
    std::uint64_t components = 0;
    std::uint64_t time_count = 0;
    std::uint64_t record_points = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> payload;

    void save(const std::string& path) const;
    static Checkpoint load(const std::string& path);
};

}  // namespace msqg
