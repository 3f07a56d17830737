// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace mrtoa {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic child-seed derivation, independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t a, std::uint64_t b = 0)
{
    return splitmix64(parent ^ splitmix64(a ^ splitmix64(b + 0x1234abcdULL)));
}

// Gaussian generator built on mt19937_64 with an explicit Box-Muller
// transform, so the produced stream is identical on every platform
// (std::normal_distribution is implementation defined).
class gaussian_rng {
  public:
    explicit gaussian_rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in (0, 1]
    double uniform()
    {
        return static_cast<double>((eng_() >> 11) + 1ULL) * 0x1.0p-53;
    }

    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // zero-mean circular complex Gaussian with E|z|^2 = variance
    std::complex<double> complex_normal(double variance)
    {
        const double s = std::sqrt(variance / 2.0);
        const double re = s * normal();
        const double im = s * normal();
        return {re, im};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mrtoa
