#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "goldbach/errors.hpp"
#include "goldbach/primality.hpp"
#include "goldbach/sieve.hpp"
#include "oracle.hpp"

using goldbach::is_prime_u64;
using goldbach::kMillerRabinWitnesses;
using goldbach::modmul;
using goldbach::modpow;
using goldbach::ParamError;

TEST_CASE("modmul fixed points") {
    CHECK(modmul(0, 12345, 99) == 0);
    CHECK(modmul(12345, 0, 99) == 0);
    CHECK(modmul(1, 77, 100) == 77);
    CHECK(modmul(uint64_t{1} << 63, 2, ~uint64_t{0}) == 1);
    CHECK(modmul(~uint64_t{0}, ~uint64_t{0}, ~uint64_t{0}) == 0);
    CHECK(modmul(5, 5, 1) == 0);
}

TEST_CASE("modmul zero modulus rejected") {
    CHECK_THROWS_AS(modmul(2, 3, 0), ParamError);
    CHECK_THROWS_AS(modpow(2, 3, 0), ParamError);
}

TEST_CASE("modmul agrees with arbitrary precision on random 64-bit triples") {
    std::mt19937_64 rng(0x5eed01);
    for (int i = 0; i < 100'000; ++i) {
        uint64_t a = rng();
        uint64_t b = rng();
        uint64_t m = rng() | 1; // nonzero
        REQUIRE(modmul(a, b, m) == oracle::modmul(a, b, m));
    }
}

TEST_CASE("modpow fixed points") {
    CHECK(modpow(2, 10, 1000) == 24);
    CHECK(modpow(7, 0, 13) == 1);
    CHECK(modpow(7, 0, 1) == 0); // 1 % 1
    CHECK(modpow(0, 0, 5) == 1); // empty product
    CHECK(modpow(3, 1, 5) == 3);
}

TEST_CASE("modpow agrees with arbitrary precision on random inputs") {
    std::mt19937_64 rng(0x5eed02);
    for (int i = 0; i < 20'000; ++i) {
        uint64_t a = rng();
        uint64_t e = rng() % 100'000;
        uint64_t m = rng() | 1;
        REQUIRE(modpow(a, e, m) == oracle::modpow(a, e, m));
    }
}

TEST_CASE("is_prime_u64 fixed points") {
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(1));
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK_FALSE(is_prime_u64(4));
    CHECK_FALSE(is_prime_u64(561));   // Carmichael number
    CHECK_FALSE(is_prime_u64(25326001)); // strong pseudoprime to bases 2,3,5
    CHECK(is_prime_u64((uint64_t{1} << 61) - 1)); // Mersenne prime
    CHECK_FALSE(is_prime_u64(~uint64_t{0}));      // 2^64 - 1 = 3*5*17*257*...
    CHECK(is_prime_u64(18446744073709551557ull)); // largest 64-bit prime
}

TEST_CASE("witness set is the canonical 12 primes") {
    REQUIRE(kMillerRabinWitnesses.size() == 12);
    uint32_t expect[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (size_t i = 0; i < 12; ++i)
        CHECK(kMillerRabinWitnesses[i] == expect[i]);
}

TEST_CASE("exhaustive agreement with trial division below 10^5") {
    for (uint64_t n = 0; n < 100'000; ++n)
        REQUIRE(is_prime_u64(n) == oracle::trial_division_is_prime(n));
}

TEST_CASE("agreement with arbitrary precision near the 2^64 ceiling") {
    uint64_t top = ~uint64_t{0};
    for (uint64_t n = top; n > top - 2000; --n)
        REQUIRE(is_prime_u64(n) == oracle::is_prime(n));
}

TEST_CASE("agreement with arbitrary precision on random 64-bit values") {
    std::mt19937_64 rng(0x5eed03);
    for (int i = 0; i < 20'000; ++i) {
        uint64_t n = rng();
        REQUIRE(is_prime_u64(n) == oracle::is_prime(n));
    }
}

TEST_CASE("cross-module: base primes are exactly the is_prime_u64 odds") {
    auto base = goldbach::build_base_primes(10'000'000'000ull);
    REQUIRE(base.sqrt_bound >= 100'000);
    std::mt19937_64 rng(0x5eed04);
    for (int i = 0; i < 2000; ++i) {
        uint64_t v = 3 + 2 * (rng() % ((base.sqrt_bound - 3) / 2));
        bool in_table = std::binary_search(base.primes.begin(),
                                           base.primes.end(), v);
        REQUIRE(in_table == is_prime_u64(v));
    }
}
