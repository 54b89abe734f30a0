/*
End-to-end MLC and BICM transceivers.

Both scheme kinds transmit exactly n_sym channel symbols per frame, so equal
n_sym means equal structural delay. MLC uses one length-n_sym polar code per
label bit (natural labeling, level 0 = msb, decoded first); BICM uses a
single length-(m*n_sym) polar code, an interleaver, and parallel bit metrics.
*/

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "polarmod/bits.hpp"
#include "polarmod/channel.hpp"
#include "polarmod/constellation.hpp"
#include "polarmod/polar.hpp"
#include "polarmod/rng.hpp"

namespace polarmod {

inline void check_permutation(const std::vector<std::uint32_t>& perm) {
    std::vector<std::uint8_t> seen(perm.size(), 0);
    for (auto p : perm) {
        if (p >= perm.size() || seen[p])
            throw std::invalid_argument("interleaver: not a permutation");
        seen[p] = 1;
    }
}

// Stream position i carries element perm[i] of the input sequence.
template <class T>
std::vector<T> interleave(const std::vector<T>& seq, const std::vector<std::uint32_t>& perm) {
    if (seq.size() != perm.size())
        throw std::invalid_argument("interleave: sequence/permutation length mismatch");
    check_permutation(perm);
    std::vector<T> out(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[perm[i]];
    return out;
}

template <class T>
std::vector<T> deinterleave(const std::vector<T>& seq, const std::vector<std::uint32_t>& perm) {
    if (seq.size() != perm.size())
        throw std::invalid_argument("deinterleave: sequence/permutation length mismatch");
    check_permutation(perm);
    std::vector<T> out(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) out[perm[i]] = seq[i];
    return out;
}

struct Interleaver {
    std::vector<std::uint32_t> perm;

    static Interleaver identity(std::size_t n) {
        Interleaver il;
        il.perm.resize(n);
        std::iota(il.perm.begin(), il.perm.end(), 0u);
        return il;
    }

    // Fisher-Yates over the identity permutation, driven by the stream
    // derive_stream(seed, 0, 0); one next_below per swap, i from n-1 down.
    static Interleaver seeded_random(std::size_t n, std::uint64_t seed) {
        Interleaver il = identity(n);
        Rng rng = derive_stream(seed, 0, 0);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
            std::swap(il.perm[i - 1], il.perm[j]);
        }
        return il;
    }

    static Interleaver from_perm(std::vector<std::uint32_t> perm) {
        check_permutation(perm);
        return Interleaver{std::move(perm)};
    }
};

enum class SchemeKind { mlc, bicm };

struct SchemeConfig {
    SchemeKind kind = SchemeKind::bicm;
    std::size_t n_sym = 0;
    Constellation constellation;
    std::vector<PolarCode> codes;  // mlc: one per level; bicm: exactly one
    Interleaver interleaver;       // bicm only

    std::size_t m() const { return constellation.m; }
    std::size_t total_bit_channels() const { return m() * n_sym; }

    std::size_t k_total() const {
        std::size_t k = 0;
        for (const auto& c : codes) k += c.info_count;
        return k;
    }

    double rate_bits_per_symbol() const {
        return static_cast<double>(k_total()) / static_cast<double>(n_sym);
    }

    NoiseModel noise_model(double sigma2) const {
        return NoiseModel(sigma2, constellation.is_complex ? 2 : 1);
    }

    void validate() const {
        if (n_sym == 0) throw std::invalid_argument("scheme: n_sym must be positive");
        if (kind == SchemeKind::mlc) {
            if (constellation.labeling != Labeling::natural)
                throw std::invalid_argument("mlc scheme requires natural labeling");
            if (codes.size() != m())
                throw std::invalid_argument("mlc scheme needs one code per label bit");
            for (const auto& c : codes)
                if (c.block_len != n_sym)
                    throw std::invalid_argument("mlc level code block length must equal n_sym");
        } else {
            if (codes.size() != 1)
                throw std::invalid_argument("bicm scheme needs exactly one code");
            if (codes[0].block_len != total_bit_channels())
                throw std::invalid_argument("bicm code block length must equal m * n_sym");
            if (interleaver.perm.size() != total_bit_channels())
                throw std::invalid_argument("bicm interleaver length must equal m * n_sym");
        }
    }

    static SchemeConfig mlc(std::size_t n_sym, Constellation constellation,
                            std::vector<PolarCode> level_codes) {
        SchemeConfig s;
        s.kind = SchemeKind::mlc;
        s.n_sym = n_sym;
        s.constellation = std::move(constellation);
        s.codes = std::move(level_codes);
        s.validate();
        return s;
    }

    static SchemeConfig bicm(std::size_t n_sym, Constellation constellation, PolarCode code,
                             Interleaver il) {
        SchemeConfig s;
        s.kind = SchemeKind::bicm;
        s.n_sym = n_sym;
        s.constellation = std::move(constellation);
        s.codes.push_back(std::move(code));
        s.interleaver = std::move(il);
        s.validate();
        return s;
    }
};

struct FrameResult {
    BitVector msg_hat;
    std::size_t bit_errors = 0;
    bool frame_error = false;
};

inline FrameResult score_frame(const BitVector& sent, BitVector decoded) {
    FrameResult r;
    r.bit_errors = count_bit_errors(sent, decoded);
    r.frame_error = r.bit_errors > 0;
    r.msg_hat = std::move(decoded);
    return r;
}

// Message split across levels in level order; symbol t carries level-l
// codeword bit t as label bit l (level 0 = msb).
inline std::vector<Symbol> mlc_encode(const BitVector& msg, const SchemeConfig& s) {
    if (s.kind != SchemeKind::mlc) throw std::invalid_argument("mlc_encode: wrong scheme kind");
    if (msg.size() != s.k_total())
        throw std::invalid_argument("mlc_encode: message length does not match total info bits");
    std::vector<BitVector> level_cw(s.m());
    std::size_t off = 0;
    for (std::size_t l = 0; l < s.m(); ++l) {
        const auto& code = s.codes[l];
        BitVector part(msg.begin() + static_cast<std::ptrdiff_t>(off),
                       msg.begin() + static_cast<std::ptrdiff_t>(off + code.info_count));
        off += code.info_count;
        level_cw[l] = polar_encode(part, code);
    }
    std::vector<Symbol> out(s.n_sym);
    for (std::size_t t = 0; t < s.n_sym; ++t) {
        std::uint32_t label = 0;
        for (std::size_t l = 0; l < s.m(); ++l)
            label = (label << 1) | level_cw[l][t];
        out[t] = s.constellation.point_for_label(label);
    }
    return out;
}

struct MlcDecodeResult {
    BitVector msg_hat;                 // level messages concatenated in level order
    std::vector<ScResult> levels;      // per-level SC output
    std::vector<LlrVector> level_llrs; // per-level demapped inputs
};

// Multistage decoding: each level is demapped conditioned on the re-encoded
// hard decisions of the levels already decoded, then SC-decoded.
inline MlcDecodeResult mlc_msd_decode(const std::vector<Symbol>& y, double sigma2,
                                      const SchemeConfig& s,
                                      CheckMode mode = CheckMode::exact) {
    if (s.kind != SchemeKind::mlc) throw std::invalid_argument("mlc_msd_decode: wrong scheme kind");
    if (y.size() != s.n_sym)
        throw std::invalid_argument("mlc_msd_decode: symbol count does not match n_sym");
    MlcDecodeResult res;
    std::vector<BitVector> decided(s.n_sym);  // per symbol, label bits of decoded levels
    for (auto& d : decided) d.reserve(s.m());
    for (std::size_t l = 0; l < s.m(); ++l) {
        LlrVector llrs(s.n_sym);
        for (std::size_t t = 0; t < s.n_sym; ++t)
            llrs[t] = demap_mlc_level(y[t], sigma2, s.constellation, l, decided[t]);
        ScResult sc = sc_decode(llrs, s.codes[l], mode);
        for (std::size_t t = 0; t < s.n_sym; ++t) decided[t].push_back(sc.x_hat[t]);
        res.msg_hat.insert(res.msg_hat.end(), sc.msg_hat.begin(), sc.msg_hat.end());
        res.levels.push_back(std::move(sc));
        res.level_llrs.push_back(std::move(llrs));
    }
    return res;
}

inline std::vector<Symbol> bicm_encode(const BitVector& msg, const SchemeConfig& s) {
    if (s.kind != SchemeKind::bicm) throw std::invalid_argument("bicm_encode: wrong scheme kind");
    const BitVector cw = polar_encode(msg, s.codes[0]);
    return map_bits(interleave(cw, s.interleaver.perm), s.constellation);
}

struct BicmDecodeResult {
    BitVector msg_hat;
    ScResult sc;
    LlrVector code_llrs;  // deinterleaved, codeword order
};

inline BicmDecodeResult bicm_sc_decode(const std::vector<Symbol>& y, double sigma2,
                                       const SchemeConfig& s,
                                       DemapMode demap = DemapMode::exact,
                                       CheckMode mode = CheckMode::exact) {
    if (s.kind != SchemeKind::bicm) throw std::invalid_argument("bicm_sc_decode: wrong scheme kind");
    if (y.size() != s.n_sym)
        throw std::invalid_argument("bicm_sc_decode: symbol count does not match n_sym");
    LlrVector stream(s.total_bit_channels());
    for (std::size_t t = 0; t < s.n_sym; ++t)
        demap_bicm_llrs(y[t], sigma2, s.constellation, demap,
                        std::span<double>(stream.data() + t * s.m(), s.m()));
    BicmDecodeResult res;
    res.code_llrs = deinterleave(stream, s.interleaver.perm);
    res.sc = sc_decode(res.code_llrs, s.codes[0], mode);
    res.msg_hat = res.sc.msg_hat;
    return res;
}

inline std::vector<Symbol> scheme_encode(const BitVector& msg, const SchemeConfig& s) {
    return s.kind == SchemeKind::mlc ? mlc_encode(msg, s) : bicm_encode(msg, s);
}

inline BitVector scheme_decode(const std::vector<Symbol>& y, double sigma2,
                               const SchemeConfig& s) {
    return s.kind == SchemeKind::mlc ? mlc_msd_decode(y, sigma2, s).msg_hat
                                     : bicm_sc_decode(y, sigma2, s).msg_hat;
}

}  // namespace polarmod
