/*
Constellations, bit labelings and exact soft demappers.

Label conventions:
  * a label is an m-bit value, written msb-first; label bit 0 is the msb and
    is also bit level 0 of a multi-level scheme;
  * mapping bit streams to symbols consumes consecutive m-bit groups,
    msb first;
  * bit 0 maps to the positive amplitude, so LLR > 0 favours bit 0 on every
    axis (same sign convention as the decoder).

ASK positions run from the most positive amplitude to the most negative;
position k carries label binary(k) (natural) or gray_code(k) (Gray). Square
QAM is the Cartesian product of two ASK axes, label = I bits then Q bits for
Gray labeling. The natural (set-partitioning) labeling of a QAM constellation
is derived from the Gray one through the label transform below, which is what
makes one polar kernel stage map between the two labelings.

The Gray/SP label transform T (upper bidiagonal, ones on diagonal and
superdiagonal) is used in two orientations:
  * T.mul_transposed(k) == gray_code(k): acting on the label read as an
    lsb-first column vector (equivalently msb-first row vector);
  * T.mul(u): acting on the msb-first column vector; composing the Gray
    mapper with this action yields the set-partitioning mapper.
Both orientations of the same literal matrix are exercised by tests.
*/

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polarmod/bits.hpp"

namespace polarmod {

using Symbol = std::complex<double>;

enum class Labeling { gray, natural };
enum class DemapMode { exact, maxlog };

inline std::uint32_t gray_encode(std::uint32_t v) { return v ^ (v >> 1); }

inline std::uint32_t gray_decode(std::uint32_t g) {
    for (int s = 1; s < 32; s <<= 1) g ^= g >> s;
    return g;
}

// Binary-reflected Gray labels for all 2^m indices, msb-first m-bit values.
inline std::vector<std::uint32_t> gray_code(std::size_t m) {
    if (m == 0) throw std::invalid_argument("gray_code: m must be at least 1");
    std::vector<std::uint32_t> out(std::size_t{1} << m);
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = gray_encode(i);
    return out;
}

// Bit `j` of an m-bit label, msb-first (j = 0 is the msb).
inline std::uint8_t label_bit(std::uint32_t label, std::size_t j, std::size_t m) {
    return static_cast<std::uint8_t>((label >> (m - 1 - j)) & 1u);
}

struct LabelMatrix {
    std::size_t m = 0;
    std::vector<std::uint8_t> a;  // row-major m*m entries in {0,1}

    LabelMatrix() = default;
    explicit LabelMatrix(std::size_t m_) : m(m_), a(m_ * m_, 0) {}

    std::uint8_t at(std::size_t i, std::size_t j) const { return a[i * m + j]; }
    std::uint8_t& at(std::size_t i, std::size_t j) { return a[i * m + j]; }

    // y = T x with x, y msb-first column vectors.
    std::uint32_t mul(std::uint32_t x) const {
        std::uint32_t y = 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::uint8_t bit = 0;
            for (std::size_t j = 0; j < m; ++j)
                bit ^= static_cast<std::uint8_t>(at(i, j) & label_bit(x, j, m));
            y |= static_cast<std::uint32_t>(bit) << (m - 1 - i);
        }
        return y;
    }

    // y = T^t x, i.e. x read as an msb-first row vector times T.
    std::uint32_t mul_transposed(std::uint32_t x) const {
        std::uint32_t y = 0;
        for (std::size_t j = 0; j < m; ++j) {
            std::uint8_t bit = 0;
            for (std::size_t i = 0; i < m; ++i)
                bit ^= static_cast<std::uint8_t>(at(i, j) & label_bit(x, i, m));
            y |= static_cast<std::uint32_t>(bit) << (m - 1 - j);
        }
        return y;
    }

    bool invertible_gf2() const {
        std::vector<std::uint8_t> w = a;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t pivot = col;
            while (pivot < m && !w[pivot * m + col]) ++pivot;
            if (pivot == m) return false;
            if (pivot != col)
                for (std::size_t j = 0; j < m; ++j) std::swap(w[col * m + j], w[pivot * m + j]);
            for (std::size_t r = 0; r < m; ++r)
                if (r != col && w[r * m + col])
                    for (std::size_t j = 0; j < m; ++j) w[r * m + j] ^= w[col * m + j];
        }
        return true;
    }
};

// T with ones on the diagonal and superdiagonal. Satisfies
// T.mul_transposed(k) == gray_encode(k) for every m-bit k; for m = 2 it is
// the transpose of the polar kernel.
inline LabelMatrix gray_sp_matrix(std::size_t m) {
    if (m == 0) throw std::invalid_argument("gray_sp_matrix: m must be at least 1");
    LabelMatrix t(m);
    for (std::size_t i = 0; i < m; ++i) {
        t.at(i, i) = 1;
        if (i + 1 < m) t.at(i, i + 1) = 1;
    }
    return t;
}

struct Constellation {
    std::size_t m = 0;                        // bits per symbol
    Labeling labeling = Labeling::gray;
    bool is_complex = false;                  // false: ASK (real axis only)
    std::vector<Symbol> points;               // position-ordered
    std::vector<std::uint32_t> labels;        // labels[k] = label at position k
    std::vector<std::uint32_t> label_to_pos;  // inverse of labels

    std::size_t size() const { return points.size(); }

    Symbol point_for_label(std::uint32_t label) const {
        return points[label_to_pos[label]];
    }
};

namespace detail {

inline void finish_labels(Constellation& c) {
    c.label_to_pos.assign(c.size(), 0);
    std::vector<std::uint8_t> seen(c.size(), 0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const std::uint32_t lab = c.labels[k];
        if (lab >= c.size() || seen[lab])
            throw std::invalid_argument("constellation labeling is not a bijection");
        seen[lab] = 1;
        c.label_to_pos[lab] = static_cast<std::uint32_t>(k);
    }
}

// Unnormalized odd-integer amplitude grid, most positive first.
inline std::vector<double> ask_amplitudes(std::size_t m) {
    const std::size_t count = std::size_t{1} << m;
    std::vector<double> amps(count);
    for (std::size_t k = 0; k < count; ++k)
        amps[k] = static_cast<double>(count - 1) - 2.0 * static_cast<double>(k);
    return amps;
}

}  // namespace detail

inline Constellation build_ask(std::size_t m, Labeling labeling) {
    if (m == 0) throw std::invalid_argument("build_ask: m must be at least 1");
    Constellation c;
    c.m = m;
    c.labeling = labeling;
    c.is_complex = false;
    const auto amps = detail::ask_amplitudes(m);
    const double count = static_cast<double>(amps.size());
    // mean square of {±1, ±3, ..., ±(M-1)} is (M^2 - 1) / 3
    const double scale = 1.0 / std::sqrt((count * count - 1.0) / 3.0);
    c.points.reserve(amps.size());
    c.labels.reserve(amps.size());
    for (std::size_t k = 0; k < amps.size(); ++k) {
        c.points.emplace_back(amps[k] * scale, 0.0);
        c.labels.push_back(labeling == Labeling::gray ? gray_encode(static_cast<std::uint32_t>(k))
                                                      : static_cast<std::uint32_t>(k));
    }
    detail::finish_labels(c);
    return c;
}

inline Constellation build_square_qam(std::size_t m, Labeling labeling) {
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("build_square_qam: m must be even and at least 2");
    const std::size_t ms = m / 2;
    const std::size_t axis = std::size_t{1} << ms;
    Constellation c;
    c.m = m;
    c.labeling = labeling;
    c.is_complex = true;
    const auto amps = detail::ask_amplitudes(ms);
    const double axis_count = static_cast<double>(axis);
    const double scale = 1.0 / std::sqrt(2.0 * (axis_count * axis_count - 1.0) / 3.0);
    c.points.resize(axis * axis);
    c.labels.assign(axis * axis, 0);
    for (std::size_t ki = 0; ki < axis; ++ki)
        for (std::size_t kq = 0; kq < axis; ++kq)
            c.points[ki * axis + kq] = Symbol(amps[ki] * scale, amps[kq] * scale);
    if (labeling == Labeling::gray) {
        for (std::size_t ki = 0; ki < axis; ++ki)
            for (std::size_t kq = 0; kq < axis; ++kq)
                c.labels[ki * axis + kq] =
                    (gray_encode(static_cast<std::uint32_t>(ki)) << ms) |
                    gray_encode(static_cast<std::uint32_t>(kq));
    } else {
        // Set-partitioning labels: natural label u sits where the Gray label
        // is T u, so the Gray mapper preceded by T is the SP mapper.
        const LabelMatrix t = gray_sp_matrix(m);
        for (std::uint32_t u = 0; u < axis * axis; ++u) {
            const std::uint32_t g = t.mul(u);
            const std::uint32_t ki = gray_decode(g >> ms);
            const std::uint32_t kq = gray_decode(g & (static_cast<std::uint32_t>(axis) - 1));
            c.labels[ki * axis + kq] = u;
        }
    }
    detail::finish_labels(c);
    return c;
}

inline Constellation build_constellation(bool qam, std::size_t m, Labeling labeling) {
    return qam ? build_square_qam(m, labeling) : build_ask(m, labeling);
}

// Consecutive m-bit groups (msb first) through the labeling.
inline std::vector<Symbol> map_bits(const BitVector& bits, const Constellation& c) {
    if (bits.size() % c.m != 0)
        throw std::invalid_argument("map_bits: bit count not divisible by bits per symbol");
    check_bits(bits, "map_bits input");
    std::vector<Symbol> out;
    out.reserve(bits.size() / c.m);
    for (std::size_t i = 0; i < bits.size(); i += c.m) {
        std::uint32_t label = 0;
        for (std::size_t j = 0; j < c.m; ++j)
            label = (label << 1) | bits[i + j];
        out.push_back(c.point_for_label(label));
    }
    return out;
}

namespace detail {

inline double lse_pair(double acc, double x) {
    if (acc == -std::numeric_limits<double>::infinity()) return x;
    if (x > acc) std::swap(acc, x);
    return acc + std::log1p(std::exp(x - acc));
}

}  // namespace detail

// Parallel bit metrics: out[j] is the exact (or max-log) LLR of label bit j
// given y, marginalized over all other bits with uniform priors.
inline void demap_bicm_llrs(Symbol y, double sigma2, const Constellation& c,
                            DemapMode mode, std::span<double> out) {
    if (sigma2 <= 0.0) throw std::invalid_argument("demap: sigma2 must be positive");
    if (out.size() != c.m) throw std::invalid_argument("demap: output span size mismatch");
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c.m; ++j) {
        double m0 = neg_inf, m1 = neg_inf;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double metric = -std::norm(y - c.points[k]) / (2.0 * sigma2);
            double& acc = label_bit(c.labels[k], j, c.m) ? m1 : m0;
            acc = (mode == DemapMode::maxlog) ? std::max(acc, metric)
                                              : detail::lse_pair(acc, metric);
        }
        out[j] = clamp_llr(m0 - m1);
    }
}

inline LlrVector demap_bicm_llrs(Symbol y, double sigma2, const Constellation& c,
                                 DemapMode mode = DemapMode::exact) {
    LlrVector out(c.m);
    demap_bicm_llrs(y, sigma2, c, mode, out);
    return out;
}

// Level-conditional LLR: only points whose labels agree with `lower_bits` on
// levels < level take part; levels > level are marginalized (log-sum-exp).
inline double demap_mlc_level(Symbol y, double sigma2, const Constellation& c,
                              std::size_t level, const BitVector& lower_bits,
                              DemapMode mode = DemapMode::exact) {
    if (sigma2 <= 0.0) throw std::invalid_argument("demap: sigma2 must be positive");
    if (level >= c.m) throw std::invalid_argument("demap_mlc_level: level out of range");
    if (lower_bits.size() != level)
        throw std::invalid_argument("demap_mlc_level: lower_bits must have one bit per lower level");
    check_bits(lower_bits, "lower_bits");
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    double m0 = neg_inf, m1 = neg_inf;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const std::uint32_t lab = c.labels[k];
        bool match = true;
        for (std::size_t j = 0; j < level; ++j)
            if (label_bit(lab, j, c.m) != lower_bits[j]) { match = false; break; }
        if (!match) continue;
        const double metric = -std::norm(y - c.points[k]) / (2.0 * sigma2);
        double& acc = label_bit(lab, level, c.m) ? m1 : m0;
        acc = (mode == DemapMode::maxlog) ? std::max(acc, metric)
                                          : detail::lse_pair(acc, metric);
    }
    return clamp_llr(m0 - m1);
}

}  // namespace polarmod
