#ifndef STK_RNG_HPP
#define STK_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace stk {

// Deterministic RNG wrapper. std::mt19937_64 is fully specified by the
// standard; the distribution helpers below are hand-rolled because the
// standard <random> distributions are implementation-defined and would
// break byte-identical reports across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in (0,1), 53-bit resolution, never exactly 0.
    double uniform01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform in [0, n), n > 0. Modulo bias is irrelevant at our scales.
    int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = gen_() % i;
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace stk

#endif
