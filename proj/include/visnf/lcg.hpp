#pragma once

#include <cstdint>

namespace visnf {

// Deterministic 64-bit linear congruential generator.  Seeded suites and
// the CLI use this so runs are reproducible across platforms; the
// constants (Knuth's MMIX multiplier and increment) are part of the
// documented interface, and draws take the top 31 bits of the state.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        return next_raw() >> 33;
    }

    // Full advanced state, for seeding independent sub-generators.
    std::uint64_t next_raw() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    // Uniform draw from the inclusive range [lo, hi].
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

}  // namespace visnf
