#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rnm {

// Purposes get disjoint substreams so extra draws in one never shift another.
enum class Purpose : std::uint64_t {
    Generation = 1,
    Activation = 2,
    EdgeDraw = 3,
    Residual = 4,
    Resampling = 5,
    Solver = 6,
    Colors = 7,
};

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based split: the stream for (seed, purpose, i, j) is a pure function of its inputs.
std::uint64_t derive_seed(std::uint64_t seed, Purpose purpose, std::uint64_t i = 0, std::uint64_t j = 0);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Purpose purpose, std::uint64_t i = 0, std::uint64_t j = 0)
        : engine_(derive_seed(seed, purpose, i, j)) {}

    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace rnm
