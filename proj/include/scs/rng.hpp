#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace scs {

/// Deterministic random number generator used by every stochastic operation.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// derives all variates with hand-rolled, platform-independent arithmetic —
/// no std::uniform_*_distribution, whose streams vary between standard
/// library implementations. Given the same seed, every build on every
/// platform produces the same draws.
///
/// Reproducibility contract: the order in which an algorithm consumes draws
/// is part of its behaviour. Operations that use Rng document their draw
/// order; changing that order is a breaking change.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Next raw 64-bit value from the engine.
    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits: (u64 >> 11) * 2^-53.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi): lo + (hi - lo) * uniform01().
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform index in [0, n). Uses modulo reduction; the bias is below
    /// n / 2^64 and irrelevant for the population sizes used here.
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % static_cast<std::uint64_t>(n));
    }

    /// In-place Fisher–Yates shuffle, drawing index(i + 1) for i = n-1 .. 1.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace scs
