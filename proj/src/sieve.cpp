#include "goldbach/sieve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "goldbach/errors.hpp"

namespace goldbach {

namespace {

// Rosser-Schoenfeld style upper bound on pi(x), used only to reserve space.
uint64_t pi_upper(uint64_t x) {
    if (x < 17) return 8;
    double d = static_cast<double>(x);
    return static_cast<uint64_t>(1.26 * d / std::log(d)) + 1;
}

} // namespace

std::vector<uint64_t> simple_sieve(uint64_t limit, uint64_t mem_cap_bytes) {
    if (limit < 2) throw ParamError("simple_sieve: limit must be >= 2");
    uint64_t need = limit / 8 + pi_upper(limit) * sizeof(uint64_t) + 4096;
    if (need > mem_cap_bytes)
        throw ResourceError("simple_sieve: working set of " +
                            std::to_string(need) + " bytes exceeds cap of " +
                            std::to_string(mem_cap_bytes) + " bytes");

    std::vector<bool> composite(limit + 1, false);
    for (uint64_t i = 3; i <= limit / i; i += 2) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += 2 * i) composite[j] = true;
    }

    std::vector<uint64_t> primes;
    primes.reserve(pi_upper(limit));
    primes.push_back(2);
    for (uint64_t i = 3; i <= limit; i += 2)
        if (!composite[i]) primes.push_back(i);
    return primes;
}

BasePrimes build_base_primes(uint64_t cover_limit) {
    if (cover_limit < 1)
        throw ParamError("build_base_primes: cover_limit must be >= 1");

    uint64_t s = static_cast<uint64_t>(
        std::sqrt(static_cast<long double>(cover_limit)));
    if (s == 0) s = 1;
    while (s > 1 && (s - 1) >= cover_limit / (s - 1)) --s;
    while (s < cover_limit / s) ++s;

    BasePrimes base;
    base.sqrt_bound = s;
    if (s < 3) return base;

    // Odd-only sieve over [3, s]; bit i <-> 3 + 2i.
    uint64_t n_bits = (s - 3) / 2 + 1;
    PackedBits flags(n_bits, true);
    for (uint64_t v = 3; v <= s / v; v += 2) {
        if (!flags.test((v - 3) >> 1)) continue;
        for (uint64_t m = v * v; m <= s; m += 2 * v) flags.clear((m - 3) >> 1);
    }

    base.primes.reserve(pi_upper(s));
    for (uint64_t i = 0; i < n_bits; ++i)
        if (flags.test(i)) base.primes.push_back(static_cast<uint32_t>(3 + 2 * i));
    return base;
}

std::optional<uint64_t> first_tile_index(uint64_t p, uint64_t tile_lo,
                                         uint64_t seg_hi) {
    if (p < 3 || (p & 1) == 0)
        throw ParamError("first_tile_index: p must be an odd prime >= 3");
    if ((tile_lo & 1) == 0 || (seg_hi & 1) == 0)
        throw ParamError("first_tile_index: bounds must be odd");

    // Smallest odd cofactor c >= p with p*c >= tile_lo. Keeping c in a
    // separate register lets the range check happen as a division against
    // seg_hi before the product is ever formed.
    uint64_t c = tile_lo / p;
    if (c * p < tile_lo) ++c;
    if (c < p) c = p;
    if ((c & 1) == 0) ++c;
    if (c > seg_hi / p) return std::nullopt;
    uint64_t m = p * c;
    return (m - tile_lo) >> 1;
}

OddBitset tiled_sieve_segment(uint64_t lo, uint64_t hi, const BasePrimes& base,
                              const TileSpec& tiles) {
    if ((lo & 1) == 0 || (hi & 1) == 0)
        throw ParamError("tiled_sieve_segment: bounds must be odd");
    if (lo > hi) throw ParamError("tiled_sieve_segment: lo must be <= hi");
    uint64_t t_bits = tiles.odds_per_tile;
    if (t_bits < 64 || (t_bits & (t_bits - 1)) != 0)
        throw ParamError("tiled_sieve_segment: odds_per_tile must be a power "
                         "of two >= 64");
    uint64_t s = base.sqrt_bound;
    if (s == 0 || s < hi / s)
        throw ParamError("tiled_sieve_segment: base primes insufficient for "
                         "segment bound");

    OddBitset out = OddBitset::new_filled(lo, hi);
    uint64_t span = hi - lo;
    uint64_t n_bits = (span >> 1) + 1;

    // Primes with 2p <= span can strike more than one odd in the segment;
    // their next-strike index is carried across tiles. Any larger prime hits
    // at most once, so those strikes are resolved up front into a sorted list
    // and consumed as the tile pass reaches them.
    std::vector<uint64_t> stride_p, stride_next, sparse_hits;
    for (uint32_t p32 : base.primes) {
        uint64_t p = p32;
        if (p > hi / p) break; // p^2 > hi: nothing left to mark
        auto idx = first_tile_index(p, lo, hi);
        if (!idx) continue;
        if (2 * p <= span) {
            stride_p.push_back(p);
            stride_next.push_back(*idx);
        } else {
            sparse_hits.push_back(*idx);
        }
    }
    std::sort(sparse_hits.begin(), sparse_hits.end());

    std::vector<uint64_t> tile(t_bits / 64);
    size_t hit_at = 0;
    for (uint64_t t0 = 0; t0 < n_bits; t0 += t_bits) {
        uint64_t t1 = std::min(t0 + t_bits, n_bits);
        std::fill(tile.begin(), tile.end(), ~uint64_t{0});

        for (size_t i = 0; i < stride_p.size(); ++i) {
            uint64_t idx = stride_next[i];
            uint64_t p = stride_p[i];
            while (idx < t1) {
                uint64_t r = idx - t0;
                tile[r >> 6] &= ~(uint64_t{1} << (r & 63));
                idx += p;
            }
            stride_next[i] = idx;
        }
        while (hit_at < sparse_hits.size() && sparse_hits[hit_at] < t1) {
            uint64_t r = sparse_hits[hit_at++] - t0;
            tile[r >> 6] &= ~(uint64_t{1} << (r & 63));
        }

        // t0 is a multiple of 64 because odds_per_tile is; flush whole words.
        uint64_t words = (t1 - t0 + 63) >> 6;
        out.store_words(t0 >> 6, std::span<const uint64_t>(tile.data(), words));
    }

    if (lo == 1) out.clear_unchecked(1);
    return out;
}

} // namespace goldbach
