// rng.hpp
// Counter-based splittable pseudorandom stream built on the SplitMix64
// finalizer (Steele, Lea & Flood 2014; Vigna's splitmix64). The i-th draw is a
// pure function of (seed, stream, i), so any shard of a trial range can be
// reproduced by seeking to its first counter.

#pragma once

#include <cstdint>

namespace qmlab {

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(derive_key(seed, stream)) {}

    // Draw index counter: draws consumed so far; next_u64() returns draw #counter().
    std::uint64_t counter() const noexcept { return counter_; }

    // Position the stream so the next draw is draw index n.
    void seek(std::uint64_t n) noexcept { counter_ = n; }

    std::uint64_t next_u64() noexcept { return mix64(key_ + (++counter_) * kGolden); }

    // Uniform on [0, 1), 53-bit resolution.
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1).
    double next_symmetric() noexcept { return 2.0 * next_unit() - 1.0; }

    // Independent substream with the same seed; counter starts at 0.
    CounterRng split(std::uint64_t substream) const noexcept {
        CounterRng r(0);
        r.key_ = mix64(key_ + (substream ^ kWeyl));
        return r;
    }

    static std::uint64_t mix64(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
    static constexpr std::uint64_t kWeyl = 0xbb67ae8584caa73bull;

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) noexcept {
        return mix64(seed + kGolden) ^ mix64(stream ^ kWeyl);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qmlab
