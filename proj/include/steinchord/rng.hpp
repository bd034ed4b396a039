#pragma once

#include <cstdint>

namespace steinchord {

// Splittable counter-seeded generator.  A stream is identified by the pair
// (seed, stream); the initial state is seed and stream each passed through
// the splitmix64 finalizer and combined, after which the sequence is plain
// splitmix64.  This construction is frozen: published sample streams must be
// reproducible across versions, so any change here is a breaking change.
//
// Distinct stream indices under one seed give statistically independent
// sequences (the finalizer is a bijective avalanche mix), which is what the
// Monte Carlo drivers rely on when they hand stream b to sample block b.
class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : state_(mix(mix(seed) ^ mix(stream ^ 0x6a09e667f3bcc909ull))) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix_final(state_);
    }

    // Uniform on {0, 1, ..., bound-1}, unbiased via rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

  private:
    static std::uint64_t mix_final(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t z) {
        return mix_final(z + 0x9e3779b97f4a7c15ull);
    }

    std::uint64_t state_;
};

}  // namespace steinchord
