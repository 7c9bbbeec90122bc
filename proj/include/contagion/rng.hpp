#pragma once

// Counter-based random streams. Each simulated path owns a substream keyed
// by (seed, stream_id, path index), so draws depend only on that key and
// never on how paths are scheduled across workers. The block function is
// Philox4x32-10 (pinned against its published test vectors in the suite).

#include <array>
#include <cmath>
#include <cstdint>

namespace contagion {

/// Seed and substream selector for every Monte Carlo entry point. The same
/// (seed, stream_id) always reproduces the same draws; distinct stream_ids
/// give statistically independent streams.
struct RandomSource {
    std::uint64_t seed = 0;
    std::uint32_t stream_id = 0;
};

namespace detail {

struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

}  // namespace detail

/// Per-path generator: 128-bit counter = (path, stream, block), 64-bit key =
/// seed. Uniforms are strictly inside (0, 1) so exponential variates are
/// finite and positive.
class PathRng {
public:
    PathRng(RandomSource src, std::uint64_t path_index)
        : key_{static_cast<std::uint32_t>(src.seed),
               static_cast<std::uint32_t>(src.seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path_index)),
          path_hi_(static_cast<std::uint32_t>(path_index >> 32)),
          stream_(src.stream_id) {}

    double uniform() {
        if (have_ == 0) refill();
        const std::uint64_t bits = buffer_[--have_];
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Unit-rate exponential via inverse CDF, -log(1 - u).
    double exponential() { return -std::log1p(-uniform()); }

private:
    void refill() {
        const auto out = detail::Philox4x32::block({path_lo_, path_hi_, stream_, block_}, key_);
        ++block_;
        buffer_[1] = out[0] | (static_cast<std::uint64_t>(out[1]) << 32);
        buffer_[0] = out[2] | (static_cast<std::uint64_t>(out[3]) << 32);
        have_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint32_t stream_;
    std::uint32_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int have_ = 0;
};

}  // namespace contagion
