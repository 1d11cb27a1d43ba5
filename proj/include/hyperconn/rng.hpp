#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace hyperconn {

namespace detail {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31U);
}

inline constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Random stream keyed by (master_seed, stream_index). The key is hashed with
// splitmix64 into the state of a xoshiro256** generator, so every trial owns
// an independent, reproducible stream. Bounded integers use Lemire's
// multiply-shift rejection, making outputs identical on every platform.
class RngStream {
public:
    using result_type = std::uint64_t;

    static constexpr std::string_view algorithm =
        "xoshiro256** keyed by splitmix64(master_seed, stream_index); Lemire bounded integers";

    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index) {
        std::uint64_t key = master_seed;
        const std::uint64_t a = detail::splitmix64_next(key);
        std::uint64_t idx = stream_index ^ 0x632BE59BD9B4E019ULL;
        const std::uint64_t b = detail::splitmix64_next(idx);
        std::uint64_t seeder = a ^ detail::rotl(b, 17) ^ (b * 0xD1342543DE82EF95ULL);
        for (auto& s : state_) s = detail::splitmix64_next(seeder);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17U;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        unsigned __int128 prod = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                prod = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64U);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>((*this)() >> 11U) * 0x1.0p-53; }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_[4]{};
};

}  // namespace hyperconn
