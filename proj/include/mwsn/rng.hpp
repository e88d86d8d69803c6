#pragma once

#include <cmath>
#include <cstdint>

namespace mwsn {

// What a stream is drawn for. Streams with distinct purposes are decorrelated
// even for the same (trial seed, node) pair.
enum class StreamPurpose : std::uint64_t {
    Placement = 1,
    Mobility = 2,
    Generic = 3,
};

// Deterministic 64-bit-state generator (splitmix64). Seeded from the
// (trial seed, node id, purpose) tuple so a trial replays identically no
// matter in which order node streams are consumed.
class RandomStream {
public:
    RandomStream(std::uint64_t trial_seed, std::uint32_t node_id, StreamPurpose purpose)
        : state_(mix(mix(mix(trial_seed + 0x9E3779B97F4A7C15ull) ^ (node_id + 0xD1B54A32D192ED03ull)) ^
                     static_cast<std::uint64_t>(purpose))) {}

    explicit RandomStream(std::uint64_t raw_seed) : state_(mix(raw_seed)) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Box-Muller; consumes exactly two uniforms per call so draw counts are
    // stable regardless of the values produced.
    double gaussian(double mean, double stddev) {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace mwsn
