#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

namespace recnav {

/// Derives an independent stream seed from a top-level seed, a stage name and
/// an optional index (node id, sample id, ...). Pure function of its inputs.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream, std::uint64_t index = 0);

/// Seeded random source with platform-independent sampling helpers.
///
/// The standard distributions are implementation-defined, so bounded integers,
/// uniform reals and normals are drawn here directly from the engine output to
/// keep every seeded artifact identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). Requires n > 0.
    std::size_t uniform_index(std::size_t n);

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double uniform01();

    /// Standard normal via Box-Muller.
    double normal(double mean = 0.0, double stddev = 1.0);

    template <class It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(first[i - 1], first[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace recnav
