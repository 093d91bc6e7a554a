#include "goldbach/verifier.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <span>

#include "goldbach/errors.hpp"
#include "goldbach/primality.hpp"

namespace goldbach {

namespace {

void check_job(const SegmentJob& job) {
    if ((job.a & 1) || (job.b & 1))
        throw ParamError("segment bounds must be even");
    if (job.a < 4 || job.a > job.b)
        throw ParamError("segment must satisfy 4 <= a <= b");
}

} // namespace

SmallPrimeTable SmallPrimeTable::build(uint64_t p_small) {
    if (p_small < 3)
        throw ParamError("SmallPrimeTable: p_small must be >= 3");
    return {simple_sieve(p_small), p_small};
}

Phase2Table Phase2Table::build(uint64_t limit) {
    if (limit < 2) return {}; // disabled: every lookup goes to Miller-Rabin
    return {simple_sieve(limit), limit};
}

OddRange sieve_range_for(const SegmentJob& job, uint64_t p_small) {
    check_job(job);
    uint64_t lo = job.a > p_small ? job.a - p_small : 0;
    if (lo < 3) lo = 3;
    if ((lo & 1) == 0) ++lo; // q = n - p is odd; round up to the first odd
    uint64_t hi = job.b - 3;
    if (hi < lo) hi = lo; // degenerate [4,4] job: no lookup below b - 3
    return {lo, hi};
}

Phase1Result phase1_verify(const SegmentJob& job, const SmallPrimeTable& small,
                           const OddBitset& qbits, uint64_t batch_size,
                           std::vector<uint64_t>* min_primes_out) {
    check_job(job);
    if (batch_size == 0)
        throw ParamError("phase1_verify: batch_size must be >= 1");
    if (small.primes.empty() || small.primes.front() != 2)
        throw ParamError("phase1_verify: malformed small-prime table");

    OddRange need = sieve_range_for(job, small.p_small);
    if (qbits.lo() > need.lo || qbits.hi() < need.hi)
        throw InternalError(
            "phase1_verify: sieved range does not cover the q lookups");

    uint64_t n_evens = ((job.b - job.a) >> 1) + 1;
    Phase1Result res{PackedBits(n_evens, false), {}};
    if (min_primes_out) min_primes_out->assign(n_evens, 0);

    std::span<const uint64_t> odd(small.primes.data() + 1,
                                  small.primes.size() - 1);

    auto mark = [&](uint64_t i, uint64_t n, uint64_t p) {
        res.verified.set(i);
        res.min_prime.observe(p, n);
        if (min_primes_out) (*min_primes_out)[i] = p;
    };

    // First chunk walks every even in the segment; later chunks only
    // revisit the survivors, which in practice is a handful of values.
    std::vector<uint64_t> survivors;
    for (size_t c0 = 0; c0 < odd.size(); c0 += batch_size) {
        auto chunk = odd.subspan(c0, std::min<size_t>(batch_size,
                                                      odd.size() - c0));
        auto scan = [&](uint64_t i) {
            uint64_t n = job.a + 2 * i;
            for (uint64_t p : chunk) {
                if (p > n - 3) return false; // q would drop below 3
                if (qbits.test_unchecked(n - p)) {
                    mark(i, n, p);
                    return true;
                }
            }
            return false;
        };

        if (c0 == 0) {
            for (uint64_t i = 0; i < n_evens; ++i) {
                if (job.a + 2 * i == 4) {
                    mark(i, 4, 2); // 4 = 2 + 2, the only partition with p = 2
                    continue;
                }
                if (!scan(i)) survivors.push_back(i);
            }
        } else {
            std::erase_if(survivors, scan);
        }
        if (survivors.empty()) break;
    }
    return res;
}

UnverifiedSet count_unverified(const PackedBits& verified, uint64_t a) {
    if (a & 1) throw ParamError("count_unverified: a must be even");
    uint64_t zeros = verified.size() - verified.popcount();
    if (zeros > UINT32_MAX)
        throw InternalError("count_unverified: count does not fit 32 bits");

    UnverifiedSet out;
    out.count = static_cast<uint32_t>(zeros);
    out.values.reserve(zeros);
    auto words = verified.words();
    for (size_t w = 0; w < words.size(); ++w) {
        uint64_t inv = ~words[w];
        if (w + 1 == words.size() && (verified.size() & 63))
            inv &= (uint64_t{1} << (verified.size() & 63)) - 1;
        while (inv) {
            uint64_t i = (uint64_t{w} << 6) + std::countr_zero(inv);
            out.values.push_back(a + 2 * i);
            inv &= inv - 1;
        }
    }
    return out;
}

std::optional<GoldbachPair> phase2_resolve(uint64_t n,
                                           const SmallPrimeTable& small,
                                           const Phase2Table& phase2) {
    if (n < 4 || (n & 1))
        throw ParamError("phase2_resolve: n must be even and >= 4");
    if (small.primes.empty() || small.primes.front() != 2)
        throw ParamError("phase2_resolve: malformed small-prime table");

    auto q_prime = [&](uint64_t q) {
        if (phase2.limit >= 2 && q <= phase2.limit)
            return std::binary_search(phase2.primes.begin(),
                                      phase2.primes.end(), q);
        return is_prime_u64(q);
    };

    uint64_t half = n / 2;
    for (uint64_t p : small.primes) {
        if (p > half) return std::nullopt;
        if (q_prime(n - p)) return GoldbachPair{p, n - p};
    }

    // Continue ascending past the small table: phase-2 table primes first,
    // then raw odd candidates certified by Miller-Rabin.
    uint64_t from = small.p_small;
    if (phase2.limit > from) {
        auto it = std::upper_bound(phase2.primes.begin(), phase2.primes.end(),
                                   from);
        for (; it != phase2.primes.end(); ++it) {
            if (*it > half) return std::nullopt;
            if (q_prime(n - *it)) return GoldbachPair{*it, n - *it};
        }
        from = phase2.limit;
    }
    for (uint64_t p = (from & 1) ? from + 2 : from + 1; p <= half; p += 2)
        if (is_prime_u64(p) && q_prime(n - p)) return GoldbachPair{p, n - p};
    return std::nullopt;
}

SegmentReport verify_segment(const SegmentJob& job, const VerifyContext& ctx) {
    if (!ctx.small || !ctx.phase2 || !ctx.base)
        throw ParamError("verify_segment: context tables must be set");
    auto t0 = std::chrono::steady_clock::now();

    SegmentReport rep;
    OddRange range = sieve_range_for(job, ctx.small->p_small);
    OddBitset qbits = tiled_sieve_segment(range.lo, range.hi, *ctx.base,
                                          ctx.tiles);

    Phase1Result p1 = phase1_verify(job, *ctx.small, qbits, ctx.batch_size);
    rep.min_prime = p1.min_prime;
    rep.evens_checked = p1.verified.size();

    if (ctx.inject_fail >= job.a && ctx.inject_fail <= job.b &&
        (ctx.inject_fail & 1) == 0)
        p1.verified.clear((ctx.inject_fail - job.a) >> 1);

    UnverifiedSet leftovers = count_unverified(p1.verified, job.a);
    rep.unverified_after_phase1 = leftovers.count;

    for (uint64_t n : leftovers.values) {
        if (n == ctx.inject_fail) {
            rep.counterexamples.push_back(n);
            continue;
        }
        auto hit = phase2_resolve(n, *ctx.small, *ctx.phase2);
        if (!hit) {
            rep.counterexamples.push_back(n);
            continue;
        }
        ++rep.phase2_resolved;
        rep.min_prime.observe(hit->p, n);
    }

    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

} // namespace goldbach
