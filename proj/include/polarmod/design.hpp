/*
From a scheme description plus a construction recipe to a ready transceiver:
estimate per-bit-channel reliabilities, pick frozen channels, build codes.

The ga/bec estimators see every coded bit as one binary channel. For
higher-order constellations the ga surrogate uses the equivalent per-bit
SNR (symbol energy split evenly over the m coded bits, LLR mean 2/(m*sigma2));
that is exactly the binary-AWGN design whose mismatch the mc estimator
removes by probing the modulated scheme itself.
*/

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarmod/construction.hpp"
#include "polarmod/schemes.hpp"

namespace polarmod {

enum class DesignKind { bpsk, mlc, bicm };

struct ConstellationDescriptor {
    bool qam = false;
    std::size_t m = 1;
    Labeling labeling = Labeling::gray;
};

struct InterleaverDescriptor {
    enum class Kind { identity, seeded_random };
    Kind kind = Kind::identity;
    std::uint64_t seed = 0;
};

struct SchemeDescriptor {
    DesignKind kind = DesignKind::bpsk;
    std::size_t n_sym = 0;
    ConstellationDescriptor constellation;  // ignored for bpsk (2-ASK)
    InterleaverDescriptor interleaver;      // bicm only

    std::size_t effective_m() const { return kind == DesignKind::bpsk ? 1 : constellation.m; }
};

namespace detail {

inline Constellation descriptor_constellation(const SchemeDescriptor& d) {
    if (d.kind == DesignKind::bpsk) return build_ask(1, Labeling::gray);
    if (d.kind == DesignKind::mlc) {
        if (d.constellation.labeling != Labeling::natural)
            throw std::invalid_argument("mlc scheme requires natural labeling");
        return build_constellation(d.constellation.qam, d.constellation.m, Labeling::natural);
    }
    return build_constellation(d.constellation.qam, d.constellation.m, d.constellation.labeling);
}

inline Interleaver descriptor_interleaver(const SchemeDescriptor& d, std::size_t len) {
    if (d.kind == DesignKind::bicm &&
        d.interleaver.kind == InterleaverDescriptor::Kind::seeded_random)
        return Interleaver::seeded_random(len, d.interleaver.seed);
    return Interleaver::identity(len);
}

}  // namespace detail

// The scheme with nothing frozen, as used for channel probing.
inline SchemeConfig build_probe_scheme(const SchemeDescriptor& d) {
    const Constellation c = detail::descriptor_constellation(d);
    if (d.kind == DesignKind::mlc) {
        std::vector<PolarCode> codes(c.m, PolarCode::all_info(d.n_sym));
        return SchemeConfig::mlc(d.n_sym, c, std::move(codes));
    }
    const std::size_t len = c.m * d.n_sym;
    return SchemeConfig::bicm(d.n_sym, c, PolarCode::all_info(len),
                              detail::descriptor_interleaver(d, len));
}

struct DesignResult {
    SchemeConfig scheme;
    ReliabilityList reliability;          // level-major for MLC
    std::vector<BitVector> masks;         // per level (single entry for bicm/bpsk)
    std::vector<std::size_t> k_per_level;
};

inline DesignResult build_design(const SchemeDescriptor& d, const DesignSpec& spec,
                                 unsigned workers = 1) {
    if (d.n_sym == 0) throw std::invalid_argument("design: n_sym must be positive");
    SchemeConfig probe = build_probe_scheme(d);
    const std::size_t m = probe.m();
    const std::size_t channels = probe.total_bit_channels();
    if (spec.k_total > channels)
        throw std::invalid_argument("design: K exceeds number of bit channels");

    ReliabilityList rel;
    switch (spec.estimator) {
        case Estimator::bec: {
            const ReliabilityList per = bec_bhattacharyya(log2_exact(d.n_sym), spec.bec_eps);
            if (d.kind == DesignKind::mlc) {
                rel.estimates.reserve(channels);
                for (std::size_t l = 0; l < m; ++l)
                    rel.estimates.insert(rel.estimates.end(), per.estimates.begin(),
                                         per.estimates.end());
            } else {
                rel = bec_bhattacharyya(log2_exact(channels), spec.bec_eps);
            }
            rel.source = Estimator::bec;
            rel.design_point = spec.bec_eps;
            break;
        }
        case Estimator::ga: {
            const double sigma2 = snr_to_sigma2(spec.esn0_db);
            const double mean = 2.0 / (sigma2 * static_cast<double>(m));
            if (d.kind == DesignKind::mlc) {
                const ReliabilityList per = ga_density_evolution(log2_exact(d.n_sym), mean);
                rel.estimates.reserve(channels);
                for (std::size_t l = 0; l < m; ++l)
                    rel.estimates.insert(rel.estimates.end(), per.estimates.begin(),
                                         per.estimates.end());
            } else {
                rel = ga_density_evolution(log2_exact(channels), mean);
            }
            rel.source = Estimator::ga;
            rel.design_point = spec.esn0_db;
            break;
        }
        case Estimator::mc:
            rel = mc_bit_channel_estimate(probe, spec, workers);
            break;
    }

    DesignResult out{std::move(probe), std::move(rel), {}, {}};
    if (d.kind == DesignKind::mlc) {
        std::vector<std::vector<double>> per_level(m);
        for (std::size_t l = 0; l < m; ++l)
            per_level[l].assign(out.reliability.estimates.begin() + static_cast<std::ptrdiff_t>(l * d.n_sym),
                                out.reliability.estimates.begin() + static_cast<std::ptrdiff_t>((l + 1) * d.n_sym));
        MlcAllocation alloc = allocate_mlc(per_level, spec.k_total);
        for (std::size_t l = 0; l < m; ++l)
            out.scheme.codes[l] = PolarCode(d.n_sym, alloc.masks[l]);
        out.masks = std::move(alloc.masks);
        out.k_per_level = std::move(alloc.k_per_level);
    } else {
        BitVector mask = select_frozen(out.reliability, spec.k_total);
        out.scheme.codes[0] = PolarCode(channels, mask);
        out.k_per_level = {spec.k_total};
        out.masks = {std::move(mask)};
    }
    out.scheme.validate();
    return out;
}

}  // namespace polarmod
