#ifndef MIXLIM_RNG_HPP
#define MIXLIM_RNG_HPP

#include <cstdint>
#include <random>

namespace mixlim {

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_finalize(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of replicate k: finalize(master ^ k * golden_gamma).
constexpr std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t k) noexcept {
    return splitmix64_finalize(master_seed ^ (k * 0x9E3779B97F4A7C15ULL));
}

/// Single-owner uniform stream backed by std::mt19937_64, whose output
/// sequence is fixed by the C++ standard. Each uniform takes the top 53 bits
/// of one engine output and maps them to the open interval (0, 1).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream substream(std::uint64_t master_seed, std::uint64_t k) {
        return RngStream(substream_seed(master_seed, k));
    }

    double uniform() noexcept {
        ++consumed_;
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Number of uniforms drawn so far.
    std::uint64_t consumed() const noexcept { return consumed_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t consumed_ = 0;
};

}  // namespace mixlim

#endif  // MIXLIM_RNG_HPP
