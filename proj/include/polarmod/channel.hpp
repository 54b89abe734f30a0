/*
AWGN channel application and SNR bookkeeping.

Es = 1 is assumed throughout (all constellations are built unit-energy).
Noise power is split across real dimensions: sigma2 = N0 / 2 per dimension.
A real (ASK) constellation receives noise only in its real dimension, but the
imaginary variate is still drawn and discarded so that RNG consumption per
symbol is identical for real and complex layouts.
*/

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "polarmod/constellation.hpp"
#include "polarmod/rng.hpp"

namespace polarmod {

struct NoiseModel {
    double sigma2 = 0.0;   // per real dimension
    int complex_dims = 2;  // 1 for real ASK, 2 for complex QAM

    NoiseModel(double sigma2_, int complex_dims_)
        : sigma2(sigma2_), complex_dims(complex_dims_) {
        if (sigma2 <= 0.0) throw std::invalid_argument("NoiseModel: sigma2 must be positive");
        if (complex_dims != 1 && complex_dims != 2)
            throw std::invalid_argument("NoiseModel: complex_dims must be 1 or 2");
    }
};

// N0 = 10^(-esn0_db/10), sigma2 = N0/2 per real dimension.
inline double snr_to_sigma2(double esn0_db) {
    return 0.5 * std::pow(10.0, -esn0_db / 10.0);
}

inline double ebn0_to_esn0(double ebn0_db, double rate_bits_per_symbol) {
    if (rate_bits_per_symbol <= 0.0)
        throw std::invalid_argument("ebn0_to_esn0: rate must be positive");
    return ebn0_db + 10.0 * std::log10(rate_bits_per_symbol);
}

inline double esn0_to_ebn0(double esn0_db, double rate_bits_per_symbol) {
    if (rate_bits_per_symbol <= 0.0)
        throw std::invalid_argument("esn0_to_ebn0: rate must be positive");
    return esn0_db - 10.0 * std::log10(rate_bits_per_symbol);
}

struct SnrPoint {
    double esn0_db = 0.0;
    double ebn0_db = 0.0;
    double rate = 0.0;  // info bits per channel symbol

    static SnrPoint from_esn0(double esn0_db, double rate) {
        return SnrPoint{esn0_db, esn0_to_ebn0(esn0_db, rate), rate};
    }
    static SnrPoint from_ebn0(double ebn0_db, double rate) {
        return SnrPoint{ebn0_to_esn0(ebn0_db, rate), ebn0_db, rate};
    }
};

inline std::vector<Symbol> awgn_apply(const std::vector<Symbol>& symbols,
                                      const NoiseModel& noise, Rng& rng) {
    const double sd = std::sqrt(noise.sigma2);
    std::vector<Symbol> out(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        double nr = 0.0, ni = 0.0;
        rng.normal_pair(nr, ni);
        out[i] = noise.complex_dims == 2 ? symbols[i] + Symbol(sd * nr, sd * ni)
                                         : symbols[i] + Symbol(sd * nr, 0.0);
    }
    return out;
}

}  // namespace polarmod
