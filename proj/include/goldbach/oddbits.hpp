#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "goldbach/errors.hpp"

namespace goldbach {

// Flat bit array addressed by index. Building block for OddBitset and for
// the per-segment verified flags (one bit per even integer).
class PackedBits {
public:
    PackedBits() = default;

    PackedBits(uint64_t bit_count, bool filled)
        : bits_(bit_count), words_((bit_count + 63) / 64, filled ? ~0ULL : 0ULL) {
        mask_tail();
    }

    void set(uint64_t i) { words_[i >> 6] |= 1ULL << (i & 63); }
    void clear(uint64_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }
    bool test(uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

    uint64_t size() const { return bits_; }

    uint64_t popcount() const {
        uint64_t n = 0;
        for (uint64_t w : words_) n += std::popcount(w);
        return n;
    }

    std::span<uint64_t> words() { return words_; }
    std::span<const uint64_t> words() const { return words_; }

    // Keeps the invariant that bits past size() are zero after word-level writes.
    void mask_tail() {
        if (bits_ & 63) words_.back() &= (1ULL << (bits_ & 63)) - 1;
    }

private:
    uint64_t bits_ = 0;
    std::vector<uint64_t> words_;
};

// One bit per odd integer in [lo, hi]; bit i represents lo + 2*i.
// Construction and mutation are single-owner; concurrent reads are safe.
class OddBitset {
public:
    // Backstop only -- real memory budgets are enforced by the CLI before
    // any bitset is built. 2^36 bits = 8 GiB.
    static constexpr uint64_t kDefaultBitCap = 1ULL << 36;

    // All bits start set (every odd integer a prime candidate).
    static OddBitset new_filled(uint64_t lo, uint64_t hi,
                                uint64_t bit_cap = kDefaultBitCap);

    uint64_t lo() const { return lo_; }
    uint64_t hi() const { return hi_; }
    uint64_t bit_count() const { return bits_.size(); }

    bool test(uint64_t v) const {
        check_value(v);
        return bits_.test((v - lo_) >> 1);
    }

    void clear(uint64_t v) {
        check_value(v);
        bits_.clear((v - lo_) >> 1);
    }

    // Unchecked variants for the hot verification loop; the caller has
    // already established lo <= v <= hi and v odd.
    bool test_unchecked(uint64_t v) const { return bits_.test((v - lo_) >> 1); }
    void clear_unchecked(uint64_t v) { bits_.clear((v - lo_) >> 1); }

    uint64_t popcount() const { return bits_.popcount(); }

    // Word-level flush path for the tiled sieve. first_word indexes 64-bit
    // words; the tail word is re-masked to keep slack bits zero.
    void store_words(uint64_t first_word, std::span<const uint64_t> src);

private:
    OddBitset(uint64_t lo, uint64_t hi, PackedBits bits)
        : lo_(lo), hi_(hi), bits_(std::move(bits)) {}

    void check_value(uint64_t v) const {
        if ((v & 1) == 0) throw ParamError("OddBitset: value must be odd");
        if (v < lo_ || v > hi_) throw ParamError("OddBitset: value out of range");
    }

    uint64_t lo_ = 1;
    uint64_t hi_ = 1;
    PackedBits bits_;
};

} // namespace goldbach
