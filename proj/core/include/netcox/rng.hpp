#pragma once

#include <cstdint>
#include <random>

namespace netcox {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic stream factory: every (seed, replicate, entity) triple yields
/// an independent generator, so replicate-level parallelism stays reproducible.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed) {}

    std::mt19937_64 stream(std::uint64_t replicate = 0, std::uint64_t entity = 0) const {
        std::uint64_t s = seed_;
        std::uint64_t a = detail::splitmix64(s);
        s ^= replicate * 0x9e3779b97f4a7c15ULL;
        std::uint64_t b = detail::splitmix64(s);
        s ^= entity * 0xd1b54a32d192ed03ULL;
        std::uint64_t c = detail::splitmix64(s);
        std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        return std::mt19937_64(seq);
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace netcox
