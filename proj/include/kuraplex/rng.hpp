#pragma once

#include <cstdint>

namespace kuraplex {

/// Deterministic 64-bit generator (SplitMix64, Steele et al. 2014).
///
/// The whole toolkit routes randomness through this generator instead of
/// <random> because the standard distributions are implementation-defined:
/// identical seeds must reproduce identical graphs, initial phases and
/// perturbations on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// True with probability p (one uniform01 draw).
    bool bernoulli(double p) { return uniform01() < p; }

    /// Child generator for an independent, reproducible stream. Derived as
    /// SplitMix64(seed ^ scramble(stream)), so substreams of one master seed
    /// never share state.
    SplitMix64 split(std::uint64_t stream) const {
        SplitMix64 scrambler(stream * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);
        return SplitMix64(state_ ^ scrambler.next_u64());
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Stream tags for the seed-splitting rule used by the scenario runner:
/// graph construction, initial phases and the two perturbation draws each
/// get their own substream of the master seed, so perturbation variants of
/// one scenario share identical graphs and initial states.
namespace seed_stream {
inline constexpr std::uint64_t graph = 1;
inline constexpr std::uint64_t init = 2;
inline constexpr std::uint64_t perturb_intra = 3;
inline constexpr std::uint64_t perturb_inter = 4;
}  // namespace seed_stream

}  // namespace kuraplex
