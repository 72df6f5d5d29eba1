#pragma once

#include <cstdint>
#include <random>

namespace mlc {

/// splitmix64 step; used to derive independent seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded uniform stream. One instance per simulation run; every stochastic
/// decision in a run draws from it in a fixed phase order, which is what makes
/// runs reproducible bit-for-bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace mlc
