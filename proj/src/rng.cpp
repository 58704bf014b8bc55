#include "dcsat/rng.hpp"

#include <cmath>
#include <numbers>

namespace dcsat::rng {

double SplitMix64::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0,1] so the log is finite.
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::vector<double> SplitMix64::normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
}

std::vector<double> SplitMix64::unit_vector(std::size_t n) {
    std::vector<double> v = normal_vector(n);
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s == 0.0) {
        // astronomically unlikely; fall back to e_1
        v.assign(n, 0.0);
        if (n > 0) v[0] = 1.0;
        return v;
    }
    for (auto& x : v) x /= s;
    return v;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

SplitMix64 stream(std::uint64_t seed, std::string_view name) {
    return SplitMix64(seed ^ fnv1a64(name));
}

SplitMix64 stream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
    SplitMix64 g(seed ^ fnv1a64(name));
    // burn the index into the state so stream(s, n, 0) != stream(s, n)
    std::uint64_t h = g.next() ^ (index * 0x9E3779B97F4A7C15ull + 0x13198A2E03707344ull);
    return SplitMix64(h);
}

} // namespace dcsat::rng
