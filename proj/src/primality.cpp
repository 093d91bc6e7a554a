#include "goldbach/primality.hpp"

namespace goldbach {

uint64_t modpow(uint64_t a, uint64_t e, uint64_t m) {
    if (m == 0) throw ParamError("modpow: modulus must be nonzero");
    uint64_t result = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) result = static_cast<uint64_t>(static_cast<__uint128_t>(result) * a % m);
        a = static_cast<uint64_t>(static_cast<__uint128_t>(a) * a % m);
        e >>= 1;
    }
    return result;
}

namespace {

// One Miller-Rabin round, witness a < n, n odd >= 3, n - 1 = d * 2^s.
bool witness_passes(uint64_t n, uint64_t a, uint64_t d, int s) {
    uint64_t x = modpow(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int r = 1; r < s; ++r) {
        x = static_cast<uint64_t>(static_cast<__uint128_t>(x) * x % n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime_u64(uint64_t n) noexcept {
    // Primes below 41 are exactly the witness bases; resolve tiny n by table
    // so every base used later satisfies a < n.
    if (n < 41) {
        for (uint32_t w : kMillerRabinWitnesses)
            if (n == w) return true;
        return false;
    }
    for (uint32_t w : kMillerRabinWitnesses)
        if (n % w == 0) return false;

    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint32_t w : kMillerRabinWitnesses)
        if (!witness_passes(n, w, d, s)) return false;
    return true;
}

} // namespace goldbach
