#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

namespace hamlaw {

/// Reproducibility key: (root, stream) reproduces every sampled object bit-for-bit.
/// `stream` is normally the trial index.
struct Seed {
    std::uint64_t root = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const Seed&, const Seed&) = default;
};

// Independent sub-streams derived from one Seed.
enum class Domain : std::uint64_t {
    EdgeCoins = 1,      // per-edge Bernoulli coins of G_r(n,p)
    PlantedCycle = 2,   // vertex order of the first planted cycle
    SecondCycle = 3,    // vertex order of the second planted cycle
    ThinCoins = 4,      // per-edge retention coins
    Bootstrap = 5,
    Relabel = 6,
    Auxiliary = 7,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_key(const Seed& seed, Domain domain) {
    return mix64(seed.root + mix64(seed.stream + mix64(static_cast<std::uint64_t>(domain))));
}

// Counter-based draw: a pure function of (key, counter).
constexpr std::uint64_t keyed_draw(std::uint64_t key, std::uint64_t counter) {
    return mix64(key ^ mix64(counter ^ 0xd1b54a32d192ed03ULL));
}

// Integer threshold T with (draw >> 11) < T  <=>  U < p, where U = (draw >> 11) * 2^-53.
inline std::uint64_t bernoulli_threshold(double p) {
    if (!(p > 0.0)) return 0;
    if (p >= 1.0) return std::uint64_t{1} << 53;
    return static_cast<std::uint64_t>(std::ceil(std::ldexp(p, 53)));
}

inline bool keyed_bernoulli(std::uint64_t key, std::uint64_t counter, std::uint64_t threshold) {
    return (keyed_draw(key, counter) >> 11) < threshold;
}

/// Sequential generator over the counter-based draw. Deterministic on every platform:
/// no std:: distributions are involved.
class CounterRng {
public:
    CounterRng(const Seed& seed, Domain domain) : key_(stream_key(seed, domain)) {}
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t next() { return keyed_draw(key_, counter_++); }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on [0, bound), Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        for (;;) {
            const unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
            const auto low = static_cast<std::uint64_t>(m);
            if (low >= (-bound) % bound) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hamlaw
