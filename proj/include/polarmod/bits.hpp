/*
Basic bit / LLR containers and shared numeric conventions.
*/

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarmod {

using BitVector = std::vector<std::uint8_t>;
using LlrVector = std::vector<double>;

// LLR saturation bound (natural-log units). Beyond this tanh() is flat to
// machine precision, so clamping loses nothing and keeps arithmetic finite.
inline constexpr double kLlrMax = 40.0;

inline double clamp_llr(double v) {
    return std::clamp(v, -kLlrMax, kLlrMax);
}

// Sign convention everywhere: LLR > 0 means bit 0 is more likely.
// Ties (LLR exactly 0) decide bit 0.
inline std::uint8_t hard_decision(double llr) {
    return llr < 0.0 ? 1 : 0;
}

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

inline std::size_t log2_exact(std::size_t n) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("length " + std::to_string(n) + " is not a power of two");
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

inline void check_bits(const BitVector& v, const char* what) {
    for (auto b : v)
        if (b != 0 && b != 1)
            throw std::invalid_argument(std::string(what) + ": elements must be 0 or 1");
}

inline BitVector xor_bits(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("xor_bits: length mismatch");
    BitVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline std::size_t count_bit_errors(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("count_bit_errors: length mismatch");
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] != b[i]);
    return n;
}

}  // namespace polarmod
