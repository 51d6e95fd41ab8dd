#pragma once

/*
 * Small counter-based random generator. A stream is identified by
 * (seed, stream_a, stream_b); draws are a strong integer mix of the
 * stream key and a running counter, so any stream can be recreated
 * independently of the others. Same key => same sequence on every
 * platform.
 */

#include <cstdint>

namespace nlb {

// 64-bit finalizer (murmur3 variant); bijective, well distributed.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream_a = 0,
                        std::uint64_t stream_b = 0)
        : key_(derive_key(seed, stream_a, stream_b)) {}

    std::uint64_t next_u64() {
        return mix64(key_ + (++ctr_) * 0x9e3779b97f4a7c15ULL);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b) {
        std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ULL);
        k = mix64(k ^ (a + 0xbf58476d1ce4e5b9ULL));
        k = mix64(k ^ (b + 0x94d049bb133111ebULL));
        return k;
    }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

} // namespace nlb
