#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "goldbach/oddbits.hpp"
#include "goldbach/sieve.hpp"

namespace goldbach {

// Contiguous run of even integers [a, b], both inclusive and even.
// index is the segment's position in the overall claim sequence.
struct SegmentJob {
    uint64_t a = 0;
    uint64_t b = 0;
    uint64_t index = 0;
};

// Primes up to p_small (2 included), ascending. Phase 1 scans these as
// partition candidates; read-only after construction.
struct SmallPrimeTable {
    std::vector<uint64_t> primes;
    uint64_t p_small = 0;

    static SmallPrimeTable build(uint64_t p_small);
};

// Primes up to limit for Phase 2 binary search. limit < 2 disables the
// table; lookups beyond it fall back to direct Miller-Rabin testing.
struct Phase2Table {
    std::vector<uint64_t> primes;
    uint64_t limit = 0;

    static Phase2Table build(uint64_t limit);
};

// Odd interval the sieve must cover so every Phase 1 lookup q = n - p with
// n in [a, b] and odd prime p <= p_small lands inside it.
struct OddRange {
    uint64_t lo = 0;
    uint64_t hi = 0;
};
OddRange sieve_range_for(const SegmentJob& job, uint64_t p_small);

struct GoldbachPair {
    uint64_t p = 0;
    uint64_t q = 0;
};

// Running maximum of the minimal partition prime p_min(n); ties keep the
// smallest n so results are identical for any worker count.
struct MinPrimeMax {
    uint64_t p = 0;
    uint64_t n = 0;

    void observe(uint64_t p_min, uint64_t at_n) {
        if (p_min > p || (p_min == p && p != 0 && at_n < n)) {
            p = p_min;
            n = at_n;
        }
    }
    void merge(const MinPrimeMax& o) {
        if (o.p != 0) observe(o.p, o.n);
    }
};

// Phase 1 output: bit i corresponds to n = a + 2*i.
struct Phase1Result {
    PackedBits verified;
    MinPrimeMax min_prime;
};

// Scans odd primes ascending in chunks of batch_size per even, with early
// exit on the first prime q. n = 4 is resolved as 2 + 2 directly. When
// min_primes_out is given it receives p_min(n) per even (0 if unverified).
Phase1Result phase1_verify(const SegmentJob& job, const SmallPrimeTable& small,
                           const OddBitset& qbits, uint64_t batch_size,
                           std::vector<uint64_t>* min_primes_out = nullptr);

// Zero bits of the Phase 1 result mapped back to their even values.
struct UnverifiedSet {
    uint32_t count = 0;
    std::vector<uint64_t> values;
};
UnverifiedSet count_unverified(const PackedBits& verified, uint64_t a);

// Exhaustive ascending search for the minimal partition prime of n.
// q-side membership uses the Phase 2 table below its limit and
// deterministic Miller-Rabin above it. nullopt means a counterexample.
std::optional<GoldbachPair> phase2_resolve(uint64_t n,
                                           const SmallPrimeTable& small,
                                           const Phase2Table& phase2);

// Everything a worker needs, shared and read-only during the run.
struct VerifyContext {
    const SmallPrimeTable* small = nullptr;
    const Phase2Table* phase2 = nullptr;
    const BasePrimes* base = nullptr;
    TileSpec tiles;
    uint64_t batch_size = 2'000'000;
    // Self-test hook: pretend this even failed both phases so the
    // counterexample path can be exercised end to end.
    uint64_t inject_fail = 0;
};

struct SegmentReport {
    uint64_t evens_checked = 0;
    uint32_t unverified_after_phase1 = 0;
    uint64_t phase2_resolved = 0;
    std::vector<uint64_t> counterexamples;
    MinPrimeMax min_prime;
    double elapsed_seconds = 0.0;
};

// Full pipeline for one segment: sieve the q range, Phase 1 scan, Phase 2
// for the stragglers. Pure function of (job, ctx); thread-safe.
SegmentReport verify_segment(const SegmentJob& job, const VerifyContext& ctx);

} // namespace goldbach
