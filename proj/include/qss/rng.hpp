#ifndef QSS_RNG_HPP
#define QSS_RNG_HPP

// Counter-based deterministic randomness.  Every draw is a hash of
// (seed, stream, counter), so independent streams can be derived for
// adversaries, coin sources and per-trial sweeps without coordination, and a
// run is exactly reproducible from its seed.

#include <cstdint>

namespace qss {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

class CounterRng {
  public:
    CounterRng() = default;
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(detail::splitmix64(seed ^ detail::splitmix64(stream * 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next_u64() { return detail::splitmix64(state_ ^ counter_++); }

    // uniform in [0, bound) by rejection
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t limit = ~0ULL - ~0ULL % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    std::uint32_t field_element(std::uint32_t p) { return std::uint32_t(next_below(p)); }

    // nonzero field element
    std::uint32_t field_element_nz(std::uint32_t p) {
        return std::uint32_t(1 + next_below(p - 1));
    }

    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    CounterRng derive(std::uint64_t stream) const {
        return CounterRng(state_, stream ^ 0xa02bdbf7bb3c0a7ULL);
    }

  private:
    std::uint64_t state_ = 0x853c49e6748fea9bULL;
    std::uint64_t counter_ = 0;
};

}  // namespace qss

#endif
