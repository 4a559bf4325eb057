// Deterministic, portable random streams for reproducible experiments.
//
// std::mt19937_64's raw output sequence is fixed by the standard, but the
// standard distributions (uniform_int_distribution etc.) are not portable
// across library implementations, and byte-identical reruns are a hard
// requirement here. So the mappings from raw bits to bounded integers and
// doubles are done by hand, and replica streams are derived from
// (master_seed, replica_index) with splitmix64.
#pragma once

#include <cstdint>
#include <random>

namespace ssdlab {

// One splitmix64 step (advances the state, returns the next output).
// Used for seed derivation/whitening, never as the workload generator.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    // Independent stream for one replica. Placing the replica index on the
    // splitmix64 state grid (state = seed + index * gamma) makes replica r's
    // seed the r-th output of the splitmix64 sequence started at master_seed,
    // so streams are whitened and mutually independent for practical purposes.
    static Rng for_replica(uint64_t master_seed, uint64_t replica) {
        uint64_t state = master_seed + replica * 0x9e3779b97f4a7c15ULL;
        return Rng(splitmix64(state));
    }

    uint64_t next_u64() { return engine_(); }

    // Unbiased uniform integer in [0, n), n >= 1, by rejection: discard raw
    // draws below 2^64 mod n, then reduce. Expected < 2 draws for any n.
    uint64_t below(uint64_t n) {
        uint64_t threshold = (-n) % n;
        for (;;) {
            uint64_t x = engine_();
            if (x >= threshold)
                return x % n;
        }
    }

    // Uniform double in [0, 1) from the top 53 bits.
    double next_double() { return (engine_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace ssdlab
