#pragma once

#include <array>
#include <cstdint>

#include "goldbach/errors.hpp"

namespace goldbach {

// Fixed witness set: deterministic for every n < 2^64. This certification
// bound is why the framework's hard ceiling sits at 2^64 - 1.
inline constexpr std::array<uint32_t, 12> kMillerRabinWitnesses = {
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// (a * b) mod m with a full 128-bit intermediate; exact for all 64-bit inputs.
inline uint64_t modmul(uint64_t a, uint64_t b, uint64_t m) {
    if (m == 0) throw ParamError("modmul: modulus must be nonzero");
    return static_cast<uint64_t>(static_cast<__uint128_t>(a) * b % m);
}

// (a ^ e) mod m by square-and-multiply over modmul.
uint64_t modpow(uint64_t a, uint64_t e, uint64_t m);

// Deterministic primality for all 64-bit n. Pure; safe from any thread.
bool is_prime_u64(uint64_t n) noexcept;

} // namespace goldbach
