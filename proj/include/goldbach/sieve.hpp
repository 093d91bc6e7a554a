#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "goldbach/oddbits.hpp"

namespace goldbach {

// Odd primes up to sqrt_bound, shared read-only by every worker. 4-byte
// storage is enough for any bound reachable under the 2^64 ceiling.
struct BasePrimes {
    std::vector<uint32_t> primes;
    uint64_t sqrt_bound = 0;
};

// Tile sized to stay resident in L1 while a tile is being sieved.
// 32,768 odd numbers = 4 KB of bits.
struct TileSpec {
    static constexpr uint64_t kDefaultOddsPerTile = 32768;
    uint64_t odds_per_tile = kDefaultOddsPerTile; // power of two, >= 64
};

// Plain sieve of Eratosthenes; exactly the primes <= limit, ascending,
// including 2. Deliberately kept simple: it is the reference the segmented
// sieve is validated against. mem_cap_bytes bounds the working set.
std::vector<uint64_t> simple_sieve(uint64_t limit,
                                   uint64_t mem_cap_bytes = uint64_t(8) << 30);

// Base primes sufficient to sieve any segment with hi <= cover_limit.
// sqrt_bound is the smallest s with s >= cover_limit / s, which guarantees
// s*s + s - 1 >= cover_limit without ever forming s*s.
BasePrimes build_base_primes(uint64_t cover_limit);

// Bit index, relative to tile_lo, of the first odd multiple of p at or
// above max(p^2, tile_lo); nullopt when that multiple would exceed seg_hi.
// All comparisons are division-bounded -- no intermediate product can
// exceed 64 bits, even for p > 2^32.
std::optional<uint64_t> first_tile_index(uint64_t p, uint64_t tile_lo,
                                         uint64_t seg_hi);

// Segmented sieve over the odd interval [lo, hi]: returned bitset has a set
// bit exactly for the odd primes (the bit for 1, if in range, is cleared).
// Marking runs tile by tile through a buffer of tiles.odds_per_tile bits.
OddBitset tiled_sieve_segment(uint64_t lo, uint64_t hi, const BasePrimes& base,
                              const TileSpec& tiles = {});

} // namespace goldbach
