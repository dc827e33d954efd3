#pragma once

#include <cstdint>
#include <random>

#include "sqrtlasso/prob.hpp"

namespace sqrtlasso {

// Derives child seeds from a root seed and an index; used so that parallel
// workers draw disjoint, reproducible streams.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded stream of uniforms and gaussians. Gaussians come from the inverse
// CDF applied to explicit 53-bit uniforms, so the draw sequence depends only
// on the mt19937_64 state and not on library distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // in (0,1), never hitting either endpoint
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() { return normal_quantile(uniform()); }

    // Student t with k degrees of freedom as a ratio of gaussians.
    double student_t(int k) {
        const double z = gaussian();
        double chi2 = 0.0;
        for (int i = 0; i < k; ++i) {
            const double g = gaussian();
            chi2 += g * g;
        }
        return z / std::sqrt(chi2 / static_cast<double>(k));
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace sqrtlasso
