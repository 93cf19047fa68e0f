#include "checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace msqg {

namespace {

constexpr char kMagic[5] = {'M', 'S', 'Q', 'G', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void Checkpoint::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot open checkpoint for writing: " + path);
    os.write(kMagic, sizeof(kMagic));
    put(os, kVersion);
    put(os, n);
    put(os, components);
    put(os, time_count);
    put(os, record_points);
    put(os, dt);
    put(os, seed);
    os.write(reinterpret_cast<const char*>(payload.data()),
             std::streamsize(payload.size() * sizeof(double)));
    if (!os) throw ConfigError("short write on checkpoint: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open checkpoint: " + path);
    char magic[5];
    is.read(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ConfigError("bad checkpoint magic in " + path);
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion)
        throw ConfigError("unsupported checkpoint version in " + path);
    Checkpoint c;
    c.n = get<std::uint64_t>(is);
    c.components = get<std::uint64_t>(is);
    c.time_count = get<std::uint64_t>(is);
    c.record_points = get<std::uint64_t>(is);
    c.dt = get<double>(is);
    c.seed = get<std::uint64_t>(is);
    c.payload.resize(c.record_points * c.components *
                     std::max<std::uint64_t>(c.time_count, 1));
    is.read(reinterpret_cast<char*>(c.payload.data()),
            std::streamsize(c.payload.size() * sizeof(double)));
    if (!is) throw ConfigError("short read on checkpoint: " + path);
    return c;
}

}  // namespace msqg
