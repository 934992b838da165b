#pragma once

#include <cmath>
#include <cstdint>

namespace rpt {

// Splittable counter-based random stream.
//
// A stream is identified by a 64-bit key. child(i) derives the key of an
// independent substream from (key, i) only, so a subtree's draws do not
// depend on how many values its ancestors consumed and sibling subtrees can
// be processed in any order (or concurrently) with identical results.
// Identical (seed, child path) always reproduces identical draws.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : key_(mix(seed ^ kKeySalt)) {}

    SplitRng child(std::uint64_t index) const {
        SplitRng c;
        c.key_ = mix(key_ ^ mix(index + kChildSalt));
        return c;
    }

    std::uint64_t next_u64() {
        counter_ += kGolden;
        return mix(key_ + counter_);
    }

    // Uniform on [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1].
    double next_double_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on {0, ..., bound-1}. bound must be nonzero.
    std::uint64_t uniform_index(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_double_open();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    SplitRng() = default;

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kKeySalt = 0xD1B54A32D192ED03ull;
    static constexpr std::uint64_t kChildSalt = 0x8CB92BA72F3D8DD7ull;
    static constexpr double kPi = 3.14159265358979323846;

    // splitmix64 finalizer (full avalanche).
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace rpt
