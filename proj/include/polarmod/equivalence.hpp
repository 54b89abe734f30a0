/*
Executable check that 4-QAM BICM and MLC polar transmission coincide under
equal structural delay.

Static part: the Gray mapper preceded by the label transform T (msb-first
column action) is the set-partitioning mapper, exhaustively over the four
labels.

Dynamic part: the length-2N BICM code is one polar kernel stage on top of
two length-N constituent codes. The kernel stage combines codeword positions
(t, t+N), so symbol t must carry exactly those two bits; with consecutive
msb-first bit grouping this is the pairing permutation stream[2t] = x[t],
stream[2t+1] = x[t+N]. Under that wiring:

  * u-halves of the BICM code are the two MLC level inputs, so one frozen
    mask selected from a shared reliability list splits into the two level
    masks;
  * the SC schedule of the 2N code decodes the first half, then the second,
    which is exactly multistage decoding of the two level codes;
  * per symbol, the level-0 marginal LLR equals checknode(LI, LQ) and the
    level-1 conditional LLR equals varnode(LI, LQ, c0_hat) on the two Gray
    bit metrics of the same symbol.

The dynamic check verifies the LLR identities numerically and that both
receivers deliver identical messages on common (message, noise) draws.
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "polarmod/construction.hpp"
#include "polarmod/design.hpp"
#include "polarmod/schemes.hpp"

namespace polarmod {

struct EquivalenceReport {
    bool label_identity_ok = false;
    std::size_t trials_run = 0;
    std::size_t decisions_equal = 0;
    double max_llr_gap = 0.0;
};

inline bool equivalence_static_4qam() {
    const Constellation gray = build_square_qam(2, Labeling::gray);
    const Constellation natural = build_square_qam(2, Labeling::natural);
    const LabelMatrix t = gray_sp_matrix(2);
    for (std::uint32_t u = 0; u < 4; ++u)
        if (gray.point_for_label(t.mul(u)) != natural.point_for_label(u)) return false;
    return true;
}

// Permutation: symbol t carries codeword bits (x[t], x[t+N]).
inline Interleaver pairing_interleaver(std::size_t n_sym) {
    std::vector<std::uint32_t> perm(2 * n_sym);
    for (std::size_t t = 0; t < n_sym; ++t) {
        perm[2 * t] = static_cast<std::uint32_t>(t);
        perm[2 * t + 1] = static_cast<std::uint32_t>(t + n_sym);
    }
    return Interleaver::from_perm(std::move(perm));
}

inline EquivalenceReport equivalence_check_4qam(std::size_t n_sym, std::size_t k_total,
                                                const DesignSpec& design, std::size_t trials,
                                                std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("equivalence: trials must be at least 1");
    if (k_total > 2 * n_sym)
        throw std::invalid_argument("equivalence: K exceeds number of bit channels");
    log2_exact(n_sym);

    EquivalenceReport report;
    report.label_identity_ok = equivalence_static_4qam();

    const double sigma2 = snr_to_sigma2(design.esn0_db);
    const Constellation gray = build_square_qam(2, Labeling::gray);
    const Constellation natural = build_square_qam(2, Labeling::natural);
    const std::size_t code_len = 2 * n_sym;

    // Shared reliability list for the length-2N code. Each Gray bit rides a
    // BPSK subchannel of amplitude 1/sqrt(2), i.e. LLR mean 1/sigma2.
    ReliabilityList rel;
    switch (design.estimator) {
        case Estimator::bec:
            rel = bec_bhattacharyya(log2_exact(code_len), design.bec_eps);
            break;
        case Estimator::ga:
            rel = ga_density_evolution(log2_exact(code_len), 1.0 / sigma2);
            break;
        case Estimator::mc: {
            SchemeConfig probe = SchemeConfig::bicm(n_sym, gray, PolarCode::all_info(code_len),
                                                    pairing_interleaver(n_sym));
            rel = mc_bit_channel_estimate(probe, design);
            break;
        }
    }
    const BitVector mask = select_frozen(rel, k_total);
    const BitVector mask0(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_sym));
    const BitVector mask1(mask.begin() + static_cast<std::ptrdiff_t>(n_sym), mask.end());

    const SchemeConfig bicm = SchemeConfig::bicm(n_sym, gray, PolarCode(code_len, mask),
                                                 pairing_interleaver(n_sym));
    const SchemeConfig mlc = SchemeConfig::mlc(
        n_sym, natural, {PolarCode(n_sym, mask0), PolarCode(n_sym, mask1)});

    const NoiseModel noise(sigma2, 2);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng rng = derive_stream(seed, 0, trial);
        BitVector msg(k_total);
        for (auto& b : msg) b = rng.next_bit();

        const auto sym = mlc_encode(msg, mlc);
        const auto y = awgn_apply(sym, noise, rng);

        const MlcDecodeResult md = mlc_msd_decode(y, sigma2, mlc);
        const BicmDecodeResult bd = bicm_sc_decode(y, sigma2, bicm);

        ++report.trials_run;
        report.decisions_equal += (md.msg_hat == bd.msg_hat);

        // Two routes to the same per-symbol LLRs: conditional demapping of
        // the SP labels vs one checknode/varnode pair on the Gray metrics.
        for (std::size_t t = 0; t < n_sym; ++t) {
            const LlrVector bits = demap_bicm_llrs(y[t], sigma2, gray);
            const double level0 = demap_mlc_level(y[t], sigma2, natural, 0, {});
            const std::uint8_t c0 = md.levels[0].x_hat[t];
            const double level1 = demap_mlc_level(y[t], sigma2, natural, 1, {c0});
            report.max_llr_gap = std::max(
                {report.max_llr_gap,
                 std::fabs(level0 - checknode_llr(bits[0], bits[1])),
                 std::fabs(level1 - varnode_llr(bits[0], bits[1], c0))});
        }
    }
    return report;
}

}  // namespace polarmod
