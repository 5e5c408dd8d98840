#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>

namespace copyro {

// Deterministic generator used everywhere randomness is needed. splitmix64
// core, hand-rolled distributions; output is bit-identical across platforms
// and standard libraries, which the reproducibility contract depends on.
// Substreams are derived from a root seed by name, so adding a consumer does
// not perturb the draws seen by existing ones.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; no spare caching so the draw count per
    // call is fixed
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // unbiased integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t v = next_u64();
        while (v > limit) v = next_u64();
        return v % n;
    }

    template <typename RandomIt>
    void shuffle(RandomIt first, RandomIt last) {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            const std::uint64_t j = below(i);
            std::swap(first[i - 1], first[j]);
        }
    }

    Rng substream(std::string_view name) const {
        std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a over seed bytes then name
        std::uint64_t s = state_;
        for (int i = 0; i < 8; ++i) {
            h = (h ^ (s & 0xFF)) * 0x100000001B3ULL;
            s >>= 8;
        }
        for (char c : name) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001B3ULL;
        return Rng(h);
    }

    Rng substream(std::string_view name, std::uint64_t index) const {
        Rng r = substream(name);
        std::uint64_t h = r.state_;
        for (int i = 0; i < 8; ++i) {
            h = (h ^ (index & 0xFF)) * 0x100000001B3ULL;
            index >>= 8;
        }
        return Rng(h);
    }

  private:
    std::uint64_t state_;
};

}  // namespace copyro
