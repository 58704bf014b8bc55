#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace dcsat::rng {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen because the update is pure
// 64-bit integer arithmetic, so masks and shuffles are bit-identical on
// every platform. All randomness in the project flows through this
// generator; named sub-streams are derived from one user seed.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1): top 53 bits scaled by 2^-53.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n) via 128-bit multiply-shift (floor(u * n / 2^64)).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal();

    std::vector<double> normal_vector(std::size_t n);

    // Uniform direction on the unit sphere in R^n (normalized Gaussian).
    std::vector<double> unit_vector(std::size_t n);

    // Fisher-Yates using below(); integer-only, platform independent.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.empty()) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(below(i + 1));
            std::swap(v[i], v[j]);
        }
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// FNV-1a over the stream name, folded into the user seed. Every consumer of
// randomness names its stream, so one --seed reproduces the whole pipeline.
std::uint64_t fnv1a64(std::string_view s);

SplitMix64 stream(std::uint64_t seed, std::string_view name);
SplitMix64 stream(std::uint64_t seed, std::string_view name, std::uint64_t index);

} // namespace dcsat::rng
