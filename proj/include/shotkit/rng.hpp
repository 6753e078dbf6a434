#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace shotkit {

// Deterministic random source.  mt19937_64 output is pinned by the C++
// standard, and the derived draws below are hand-rolled so that streams are
// bit-identical across platforms and standard libraries
// (std::normal_distribution / std::uniform_int_distribution are not).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi], inclusive.  Modulo bias is < 2^-50 for any range
    // used here, which is far below anything the tests can observe.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Standard normal via Box-Muller with a cached spare.
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Fisher-Yates, driven by uniform_int so the permutation is portable.
    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::int64_t i = static_cast<std::int64_t>(values.size()) - 1; i > 0; --i) {
            std::int64_t j = uniform_int(0, i);
            std::swap(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(j)]);
        }
    }

  private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace shotkit
