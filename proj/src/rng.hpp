#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace nfa {

// splitmix64: tiny, statistically solid, and cheap to seed, which matters
// because every Monte-Carlo trial gets its own stream. Stream k of a run seed
// is seed ^ (GOLDEN * (k+1)), so trial outputs are independent of how trials
// are distributed over workers.
class splitmix64 {
public:
    explicit splitmix64(uint64_t seed) noexcept : state_(seed) {}

    static constexpr uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

    static splitmix64 substream(uint64_t seed, uint64_t index) noexcept {
        return splitmix64(seed ^ (GOLDEN * (index + 1)));
    }

    uint64_t next() noexcept {
        uint64_t z = (state_ += GOLDEN);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1): the offset keeps log() in Box-Muller finite.
    double uniform_open() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1p-53;
    }

    // Standard normal pair via Box-Muller.
    void normal_pair(double& a, double& b) noexcept {
        double u1 = uniform_open();
        double u2 = uniform_open();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 2.0 * M_PI * u2;
        a = rad * std::cos(ang);
        b = rad * std::sin(ang);
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> cnormal(double variance) noexcept {
        double a, b;
        normal_pair(a, b);
        double scale = std::sqrt(variance * 0.5);
        return {scale * a, scale * b};
    }

private:
    uint64_t state_;
};

} // namespace nfa
