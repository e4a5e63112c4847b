#pragma once

#include <array>
#include <cstdint>

namespace abcmc {

// Counter-based stream built on Philox4x32-10 (Salmon et al., SC 2011,
// "Parallel random numbers: as easy as 1, 2, 3").
//
// A stream is addressed by (master_seed, stream_index): the master seed is
// the Philox key and the stream index occupies the high 64 bits of the
// 128-bit counter, so every stream owns a disjoint block of 2^64 outputs.
// Equal (seed, index) pairs replay the same sequence regardless of when or
// where the stream was created, which is what makes per-row and
// per-replicate substreams reproducible under any parallel schedule.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1), 53-bit resolution. Never returns
    // 0 or 1, so log(u) and log1p(-u) are always finite.
    double next_double();

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t position_ = 0;        // low counter words, in 128-bit blocks
    std::array<std::uint32_t, 4> block_{};
    int cursor_ = 4;                    // lane pair consumed next; 4 = refill

    void refill();
};

// Philox4x32-10 block function, exposed for the known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key);

// Derives an unrelated 64-bit seed from (master_seed, salt) with the
// SplitMix64 finalizer. Used to give each phase of a larger computation
// (table generation, pseudo-observed data, repeats, ...) its own master
// seed so their substream index spaces cannot collide.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt);

} // namespace abcmc
