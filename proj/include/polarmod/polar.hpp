/*
Binary polar transform, encoder and successive-cancellation decoding in the
LLR domain.

Conventions used throughout the library:
  * natural (non-bit-reversed) index order: the codeword is x = u * F^{(x)n}
    with kernel F = [[1,0],[1,1]], evaluated by the in-place butterfly;
  * LLR > 0 means bit 0 is more likely, ties decide 0;
  * frozen values default to all-zero but are carried per code.
*/

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "polarmod/bits.hpp"

namespace polarmod {

enum class CheckMode { exact, minsum };

// SC "f" update. Exact mode evaluates 2*atanh(tanh(a/2)*tanh(b/2)) in the
// stable log-domain form; minsum is the usual sign/min shortcut.
inline double checknode_llr(double a, double b, CheckMode mode = CheckMode::exact) {
    if (mode == CheckMode::minsum) {
        const double s = (a < 0 ? -1.0 : 1.0) * (b < 0 ? -1.0 : 1.0);
        return clamp_llr(s * std::min(std::fabs(a), std::fabs(b)));
    }
    if (a == 0.0 || b == 0.0) return 0.0;
    const double s = (a < 0 ? -1.0 : 1.0) * (b < 0 ? -1.0 : 1.0);
    const double m = s * std::min(std::fabs(a), std::fabs(b));
    const double v = m + std::log1p(std::exp(-std::fabs(a + b)))
                       - std::log1p(std::exp(-std::fabs(a - b)));
    return clamp_llr(v);
}

// SC "g" update: b + (1 - 2u) * a.
inline double varnode_llr(double a, double b, std::uint8_t u_bit) {
    return clamp_llr(b + (u_bit ? -a : a));
}

// In-place butterfly for x = u * F^{(x)n}; self-inverse over GF(2).
inline BitVector polar_transform(BitVector u) {
    const std::size_t n = u.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("polar_transform: length must be a power of two");
    for (std::size_t h = 1; h < n; h *= 2)
        for (std::size_t i = 0; i < n; i += 2 * h)
            for (std::size_t j = i; j < i + h; ++j)
                u[j] ^= u[j + h];
    return u;
}

struct PolarCode {
    std::size_t block_len = 0;   // N = 2^n
    std::size_t n = 0;           // log2(N)
    BitVector frozen_mask;       // length N, 1 = frozen
    BitVector frozen_values;     // length N, read only where mask is 1
    std::size_t info_count = 0;  // K = number of zeros in frozen_mask

    PolarCode() = default;

    PolarCode(std::size_t block_len_, BitVector frozen_mask_, BitVector frozen_values_ = {})
        : block_len(block_len_),
          n(log2_exact(block_len_)),
          frozen_mask(std::move(frozen_mask_)),
          frozen_values(std::move(frozen_values_)) {
        if (frozen_values.empty()) frozen_values.assign(block_len, 0);
        if (frozen_mask.size() != block_len || frozen_values.size() != block_len)
            throw std::invalid_argument("PolarCode: mask/value length must equal block length");
        check_bits(frozen_mask, "PolarCode frozen_mask");
        check_bits(frozen_values, "PolarCode frozen_values");
        for (auto f : frozen_mask) info_count += (f == 0);
    }

    // Rate-1 code (nothing frozen).
    static PolarCode all_info(std::size_t block_len_) {
        return PolarCode(block_len_, BitVector(block_len_, 0));
    }
};

// Scatter msg into the non-frozen positions, frozen values elsewhere.
inline BitVector build_u_vector(const BitVector& msg, const PolarCode& code) {
    if (msg.size() != code.info_count)
        throw std::invalid_argument("polar_encode: message length does not match info count");
    check_bits(msg, "message");
    BitVector u(code.block_len);
    std::size_t k = 0;
    for (std::size_t i = 0; i < code.block_len; ++i)
        u[i] = code.frozen_mask[i] ? code.frozen_values[i] : msg[k++];
    return u;
}

inline BitVector polar_encode(const BitVector& msg, const PolarCode& code) {
    return polar_transform(build_u_vector(msg, code));
}

namespace detail {

// One SC pass over the decoding tree, natural order. The leaf callback sees
// (u_index, decision LLR) and returns the bit to commit; partial sums are
// maintained so every index is decided with levels f/g-combined correctly.
//
// Workspace layout: LLR buffer for depth d lives at llr[2N - (2N >> d)],
// length N >> d; re-encoded bits keep two slots per depth (left/right child)
// so a node's codeword survives while its sibling is decoded.
template <class LeafFn>
class ScPass {
  public:
    ScPass(const LlrVector& channel_llrs, CheckMode mode, LeafFn leaf)
        : n_(channel_llrs.size()), mode_(mode), leaf_(std::move(leaf)),
          llr_(2 * n_), bits_(4 * n_) {
        std::copy(channel_llrs.begin(), channel_llrs.end(), llr_.begin());
        run(0, 0, 0);
    }

    // Codeword implied by the committed leaf bits.
    BitVector codeword() const {
        return BitVector(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n_));
    }

  private:
    std::size_t llr_off(std::size_t d) const { return 2 * n_ - ((2 * n_) >> d); }
    std::size_t bit_off(std::size_t d) const { return 4 * n_ - ((4 * n_) >> d); }

    void run(std::size_t depth, std::size_t u_base, std::size_t side) {
        const std::size_t len = n_ >> depth;
        double* in = llr_.data() + llr_off(depth);
        std::uint8_t* my = bits_.data() + bit_off(depth) + side * len;
        if (len == 1) {
            my[0] = leaf_(u_base, in[0]);
            return;
        }
        const std::size_t half = len / 2;
        double* out = llr_.data() + llr_off(depth + 1);
        for (std::size_t i = 0; i < half; ++i)
            out[i] = checknode_llr(in[i], in[i + half], mode_);
        run(depth + 1, u_base, 0);
        const std::uint8_t* left = bits_.data() + bit_off(depth + 1);
        for (std::size_t i = 0; i < half; ++i)
            out[i] = varnode_llr(in[i], in[i + half], left[i]);
        run(depth + 1, u_base + half, 1);
        const std::uint8_t* right = left + half;
        for (std::size_t i = 0; i < half; ++i) {
            my[i] = left[i] ^ right[i];
            my[i + half] = right[i];
        }
    }

    std::size_t n_;
    CheckMode mode_;
    LeafFn leaf_;
    std::vector<double> llr_;
    std::vector<std::uint8_t> bits_;
};

}  // namespace detail

struct ScResult {
    BitVector msg_hat;  // non-frozen positions of u_hat, in index order
    BitVector u_hat;
    BitVector x_hat;    // = polar_transform(u_hat)
};

inline ScResult sc_decode(const LlrVector& llrs, const PolarCode& code,
                          CheckMode mode = CheckMode::exact) {
    if (llrs.size() != code.block_len)
        throw std::invalid_argument("sc_decode: LLR length does not match block length");
    ScResult res;
    res.u_hat.assign(code.block_len, 0);
    res.msg_hat.reserve(code.info_count);
    auto leaf = [&](std::size_t i, double llr) -> std::uint8_t {
        const std::uint8_t bit =
            code.frozen_mask[i] ? code.frozen_values[i] : hard_decision(llr);
        res.u_hat[i] = bit;
        return bit;
    };
    detail::ScPass pass(llrs, mode, leaf);
    res.x_hat = pass.codeword();
    for (std::size_t i = 0; i < code.block_len; ++i)
        if (!code.frozen_mask[i]) res.msg_hat.push_back(res.u_hat[i]);
    return res;
}

// Genie-aided probe: position i is 1 iff the SC decision for u_i, taken with
// all earlier inputs forced to their true values, differs from u_true[i].
// Feeding the truth back means the per-index outcomes are exactly the error
// indicators of the synthesized bit channels, without error propagation.
inline BitVector sc_genie_probe(const LlrVector& llrs, const BitVector& u_true,
                                CheckMode mode = CheckMode::exact) {
    if (llrs.size() != u_true.size())
        throw std::invalid_argument("sc_genie_probe: length mismatch");
    check_bits(u_true, "u_true");
    BitVector err(u_true.size(), 0);
    auto leaf = [&](std::size_t i, double llr) -> std::uint8_t {
        err[i] = (hard_decision(llr) != u_true[i]);
        return u_true[i];
    };
    detail::ScPass pass(llrs, mode, leaf);
    return err;
}

}  // namespace polarmod
