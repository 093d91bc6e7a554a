#include "goldbach/oddbits.hpp"

#include <algorithm>

namespace goldbach {

OddBitset OddBitset::new_filled(uint64_t lo, uint64_t hi, uint64_t bit_cap) {
    if ((lo & 1) == 0 || (hi & 1) == 0)
        throw ParamError("OddBitset: bounds must be odd");
    if (lo > hi)
        throw ParamError("OddBitset: lo > hi");
    uint64_t bits = ((hi - lo) >> 1) + 1;
    if (bits > bit_cap)
        throw ResourceError("OddBitset: requested " + std::to_string(bits) +
                            " bits exceeds cap of " + std::to_string(bit_cap));
    return OddBitset(lo, hi, PackedBits(bits, true));
}

void OddBitset::store_words(uint64_t first_word, std::span<const uint64_t> src) {
    auto dst = bits_.words();
    if (first_word + src.size() > dst.size())
        throw ParamError("OddBitset: word store out of range");
    std::copy(src.begin(), src.end(), dst.begin() + first_word);
    bits_.mask_tail();
}

} // namespace goldbach
