#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levypot {

// Philox4x32-10 counter-based generator. The key is the run seed and the high
// half of the counter is the stream id, so every path owns an independent,
// reproducible stream no matter which thread simulates it.
class Philox {
public:
    using result_type = std::uint64_t;

    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_{static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (used_ == 2) {
            block_ = generate(block_index_++);
            used_ = 0;
        }
        const std::size_t i = 2 * used_++;
        return static_cast<std::uint64_t>(block_[i]) | (static_cast<std::uint64_t>(block_[i + 1]) << 32);
    }

    // Raw block for a counter value; exposed for known-answer tests.
    static std::array<std::uint32_t, 4> bijection(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

private:
    std::array<std::uint32_t, 4> generate(std::uint64_t index) const {
        return bijection({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_[0],
                          stream_[1]},
                         key_);
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_;
    std::array<std::uint32_t, 4> block_{};
    std::uint64_t block_index_ = 0;
    std::size_t used_ = 2;
};

} // namespace levypot
