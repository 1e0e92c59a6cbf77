#pragma once

#include <cstdint>
#include <random>

namespace modfix {

/// Deterministic uniform sampler used by every sampled check in the library.
///
/// Doubles are built from the top 53 bits of a mt19937_64 stream, so a given
/// seed reproduces the same samples bit-for-bit on every platform and
/// standard library (std::uniform_real_distribution would not guarantee
/// that).
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi) (closed on the left; hits hi only by rounding).
    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    /// Uniform in the open interval (0, 1).
    double uniform_open01() {
        double u;
        do {
            u = uniform01();
        } while (u == 0.0);
        return u;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace modfix
