#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "goldbach/errors.hpp"
#include "goldbach/primality.hpp"
#include "goldbach/sieve.hpp"
#include "oracle.hpp"

using goldbach::BasePrimes;
using goldbach::build_base_primes;
using goldbach::first_tile_index;
using goldbach::OddBitset;
using goldbach::ParamError;
using goldbach::ResourceError;
using goldbach::simple_sieve;
using goldbach::tiled_sieve_segment;
using goldbach::TileSpec;

TEST_CASE("simple_sieve small fixed points") {
    CHECK(simple_sieve(2) == std::vector<uint64_t>{2});
    CHECK(simple_sieve(10) == std::vector<uint64_t>{2, 3, 5, 7});
    CHECK(simple_sieve(30) ==
          std::vector<uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
}

TEST_CASE("simple_sieve pi(10^6) = 78498") {
    CHECK(simple_sieve(1'000'000).size() == 78498);
}

TEST_CASE("simple_sieve input and cap validation") {
    CHECK_THROWS_AS(simple_sieve(1), ParamError);
    CHECK_THROWS_AS(simple_sieve(0), ParamError);
    CHECK_THROWS_AS(simple_sieve(100'000'000, /*mem_cap_bytes=*/1 << 20),
                    ResourceError);
}

TEST_CASE("simple_sieve agrees with the oracle map") {
    auto primes = simple_sieve(10'000);
    auto map = oracle::prime_map(10'000);
    std::set<uint64_t> got(primes.begin(), primes.end());
    for (uint64_t v = 0; v <= 10'000; ++v)
        REQUIRE(got.count(v) == (map[v] ? 1u : 0u));
}

TEST_CASE("build_base_primes sqrt_bound is the minimal division-form root") {
    std::mt19937_64 rng(0xba5e);
    for (int i = 0; i < 200; ++i) {
        uint64_t limit = rng() % 1'000'000'000 + 1;
        auto base = build_base_primes(limit);
        uint64_t s = base.sqrt_bound;
        REQUIRE(s >= 1);
        REQUIRE(s >= limit / s);                      // covers the limit
        if (s > 1) REQUIRE((s - 1) < limit / (s - 1)); // and is minimal
    }
    CHECK(build_base_primes(1).sqrt_bound == 1);
    CHECK(build_base_primes(4).sqrt_bound == 2);
    CHECK(build_base_primes(11).sqrt_bound == 3); // 3*3 + 3 - 1 = 11
    CHECK(build_base_primes(12).sqrt_bound == 4);
}

TEST_CASE("build_base_primes lists exactly the odd primes up to sqrt_bound") {
    auto base = build_base_primes(100'000'000); // sqrt_bound 10^4
    auto ref = simple_sieve(base.sqrt_bound);
    REQUIRE(base.primes.size() == ref.size() - 1); // ref includes 2
    for (size_t i = 0; i < base.primes.size(); ++i)
        REQUIRE(base.primes[i] == ref[i + 1]);
    // strictly ascending, all prime
    for (size_t i = 1; i < base.primes.size(); ++i)
        REQUIRE(base.primes[i] > base.primes[i - 1]);
    for (size_t i = 0; i < base.primes.size(); i += 97)
        REQUIRE(goldbach::is_prime_u64(base.primes[i]));
}

TEST_CASE("first_tile_index fixed points") {
    // p=5 aligned into [3, ...]: first odd multiple >= max(25, 3) is 25
    CHECK(first_tile_index(5, 3, 101) == 11); // (25 - 3) / 2
    // p=3 into a tile starting at 31: first odd multiple >= 31 is 33
    CHECK(first_tile_index(3, 31, 101) == 1);
    // multiple would land past seg_hi
    CHECK(first_tile_index(11, 3, 101) == std::nullopt); // 121 > 101
    // p^2 below tile_lo: next odd multiple of 7 >= 100 is 105
    CHECK(first_tile_index(7, 101, 201) == 2); // (105 - 101) / 2
    CHECK_THROWS_AS(first_tile_index(2, 3, 9), ParamError);
    CHECK_THROWS_AS(first_tile_index(3, 4, 9), ParamError);
}

TEST_CASE("first_tile_index never overflows near the ceiling") {
    uint64_t hi = ~uint64_t{0}; // 2^64 - 1
    uint64_t lo = hi - 199'998;
    // a prime slightly above sqrt(2^64): cofactor check must reject or
    // return an in-range index without wrapping
    auto idx = first_tile_index(4'294'967'311ull, lo, hi);
    if (idx) {
        uint64_t v = lo + 2 * *idx;
        CHECK(v % 4'294'967'311ull == 0);
    }
    // small prime at the very top
    auto i3 = first_tile_index(3, lo, hi);
    REQUIRE(i3.has_value());
    CHECK((lo + 2 * *i3) % 3 == 0);
    CHECK(lo + 2 * *i3 >= lo);
}

TEST_CASE("tiled sieve over [3,31] finds exactly the primes") {
    auto base = build_base_primes(31);
    auto bits = tiled_sieve_segment(3, 31, base);
    std::set<uint64_t> want = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    for (uint64_t v = 3; v <= 31; v += 2)
        REQUIRE(bits.test(v) == (want.count(v) == 1));
}

TEST_CASE("tiled sieve clears the bit for 1") {
    auto base = build_base_primes(9);
    auto bits = tiled_sieve_segment(1, 9, base);
    CHECK_FALSE(bits.test(1));
    CHECK(bits.test(3));
    CHECK(bits.test(5));
    CHECK(bits.test(7));
    CHECK_FALSE(bits.test(9));
}

TEST_CASE("tiled sieve validation errors") {
    auto base = build_base_primes(1000);
    CHECK_THROWS_AS(tiled_sieve_segment(4, 31, base), ParamError);
    CHECK_THROWS_AS(tiled_sieve_segment(3, 30, base), ParamError);
    CHECK_THROWS_AS(tiled_sieve_segment(31, 3, base), ParamError);
    // base primes only cover hi <= 1000 (sqrt_bound 32)
    CHECK_THROWS_AS(tiled_sieve_segment(3, 2001, base), ParamError);
    TileSpec bad;
    bad.odds_per_tile = 96; // not a power of two
    CHECK_THROWS_AS(tiled_sieve_segment(3, 31, base, bad), ParamError);
    bad.odds_per_tile = 32; // too small
    CHECK_THROWS_AS(tiled_sieve_segment(3, 31, base, bad), ParamError);
}

TEST_CASE("odd prime count over [3,99] is 24") {
    auto base = build_base_primes(99);
    auto bits = tiled_sieve_segment(3, 99, base);
    uint64_t by_trial = 0;
    for (uint64_t v = 3; v <= 99; v += 2)
        by_trial += oracle::trial_division_is_prime(v);
    CHECK(by_trial == 24);
    CHECK(bits.popcount() == 24);
}

TEST_CASE("segmented sieve equals simple sieve on random segments") {
    auto base = build_base_primes(10'000'000);
    auto map = oracle::prime_map(10'000'000);
    std::mt19937_64 rng(0x5e95eed);
    for (int i = 0; i < 200; ++i) {
        uint64_t lo = rng() % 9'000'000 + 1;
        if ((lo & 1) == 0) ++lo;
        uint64_t hi = lo + 2 * (rng() % 50'000);
        auto bits = tiled_sieve_segment(lo, hi, base);
        for (uint64_t v = lo; v <= hi; v += 2)
            REQUIRE(bits.test(v) == (map[v] == 1));
    }
}

TEST_CASE("tile size does not change the result") {
    auto base = build_base_primes(3'000'000);
    for (uint64_t odds : {uint64_t{64}, uint64_t{4096}, uint64_t{32768},
                          uint64_t{1} << 20}) {
        TileSpec tiles;
        tiles.odds_per_tile = odds;
        auto bits = tiled_sieve_segment(1'000'001, 2'999'999, base, tiles);
        CHECK(bits.popcount() == 138318); // cross-checked below
    }
    // the frozen count above comes from the plain reference sieve
    auto map = oracle::prime_map(2'999'999);
    uint64_t expect = 0;
    for (uint64_t v = 1'000'001; v <= 2'999'999; v += 2) expect += map[v];
    CHECK(expect == 138318);
}

TEST_CASE("sieve near 10^12 agrees with arbitrary precision") {
    uint64_t lo = 1'000'000'000'001ull;
    uint64_t hi = lo + 20'000;
    auto base = build_base_primes(hi);
    auto bits = tiled_sieve_segment(lo, hi, base);
    for (uint64_t v = lo; v <= hi; v += 2)
        REQUIRE(bits.test(v) == oracle::is_prime(v));
}

TEST_CASE("pi(10^9) via summed segment popcounts") {
    auto base = build_base_primes(1'000'000'000);
    uint64_t count = 1; // the prime 2 is outside every odd segment
    uint64_t lo = 3;
    while (lo <= 999'999'999) {
        uint64_t hi = std::min<uint64_t>(lo + 2 * 50'000'000 - 2,
                                         999'999'999);
        count += tiled_sieve_segment(lo, hi, base).popcount();
        lo = hi + 2;
    }
    CHECK(count == 50'847'534);
    CHECK(simple_sieve(1'000'000'000).size() == 50'847'534);
}
