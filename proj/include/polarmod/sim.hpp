/*
Monte-Carlo BER/FER engine.

Determinism contract: frame f of SNR point p draws every random quantity
(message bits first, then channel noise) from derive_stream(master_seed, p, f).
Frames are simulated in waves and folded into the counters in frame-index
order, stopping at the first frame that satisfies the stopping rule, so the
counters are bit-identical for every worker count.

CSV output: '#'-prefixed metadata lines (tool version, config hash), then one
header line

  snr_db,snr_ref,frames,info_bits,bit_errors,frame_errors,ber,fer,seconds,ber_defined

and one row per SNR point. With zero info bits per frame the ber field is
left empty and ber_defined is 0.
*/

#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "polarmod/channel.hpp"
#include "polarmod/parallel.hpp"
#include "polarmod/rng.hpp"
#include "polarmod/schemes.hpp"
#include "polarmod/version.hpp"

namespace polarmod {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SnrRef { ebn0, esn0 };

inline const char* to_string(SnrRef r) { return r == SnrRef::ebn0 ? "ebn0" : "esn0"; }

struct StoppingRule {
    std::size_t min_frame_errors = 100;
    std::size_t max_frames = 10'000'000;
};

struct SimConfig {
    SchemeConfig scheme;
    std::vector<double> snr_db;
    SnrRef snr_ref = SnrRef::ebn0;
    StoppingRule stopping;
    std::uint64_t master_seed = 1;
    unsigned workers = 1;
    std::string output_path;  // empty: no file written
    std::string config_echo;  // canonical config text, hashed into the CSV

    void validate() const {
        scheme.validate();
        if (snr_db.empty()) throw ConfigError("snr.points_db: list must be non-empty");
        if (stopping.min_frame_errors < 1)
            throw ConfigError("stopping.min_frame_errors: must be at least 1");
        if (stopping.max_frames < 1) throw ConfigError("stopping.max_frames: must be at least 1");
        if (workers < 1) throw ConfigError("workers: must be at least 1");
    }
};

struct SnrPointResult {
    double snr_db = 0.0;
    SnrRef snr_ref = SnrRef::ebn0;
    std::uint64_t frames = 0;
    std::uint64_t info_bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frame_errors = 0;
    double ber = 0.0;
    double fer = 0.0;
    bool ber_defined = true;
    double seconds = 0.0;
};

struct SimResult {
    std::vector<SnrPointResult> points;
    std::string version = kVersion;
    std::uint64_t config_hash = 0;
};

inline std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x00000100000001B3ULL;
    }
    return h;
}

inline void write_csv(std::ostream& os, const SimResult& r);

namespace detail {

struct FrameOutcome {
    std::uint32_t bit_errors = 0;
    std::uint8_t frame_error = 0;
};

inline FrameOutcome simulate_frame(const SchemeConfig& scheme, double sigma2,
                                   const NoiseModel& noise, Rng rng) {
    BitVector msg(scheme.k_total());
    for (auto& b : msg) b = rng.next_bit();
    const auto sym = scheme_encode(msg, scheme);
    const auto y = awgn_apply(sym, noise, rng);
    const BitVector msg_hat = scheme_decode(y, sigma2, scheme);
    FrameOutcome out;
    out.bit_errors = static_cast<std::uint32_t>(count_bit_errors(msg, msg_hat));
    out.frame_error = out.bit_errors > 0;
    return out;
}

}  // namespace detail

inline SimResult run_simulation(const SimConfig& cfg) {
    cfg.validate();
    SimResult result;
    result.config_hash = fnv1a_hash(cfg.config_echo);
    const double rate = cfg.scheme.rate_bits_per_symbol();
    const std::size_t k = cfg.scheme.k_total();

    for (std::size_t p = 0; p < cfg.snr_db.size(); ++p) {
        const double esn0_db = (cfg.snr_ref == SnrRef::ebn0 && rate > 0.0)
                                   ? ebn0_to_esn0(cfg.snr_db[p], rate)
                                   : cfg.snr_db[p];
        const double sigma2 = snr_to_sigma2(esn0_db);
        const NoiseModel noise = cfg.scheme.noise_model(sigma2);

        SnrPointResult point;
        point.snr_db = cfg.snr_db[p];
        point.snr_ref = cfg.snr_ref;
        const auto t0 = std::chrono::steady_clock::now();

        const std::size_t wave = std::max<std::size_t>(std::size_t{64} * cfg.workers, 64);
        std::vector<detail::FrameOutcome> outcomes(wave);
        std::size_t next_frame = 0;
        bool stopped = false;
        while (!stopped && next_frame < cfg.stopping.max_frames) {
            const std::size_t count =
                std::min(wave, cfg.stopping.max_frames - next_frame);
            parallel_chunks(count, cfg.workers, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i)
                    outcomes[i] = detail::simulate_frame(
                        cfg.scheme, sigma2, noise,
                        derive_stream(cfg.master_seed, p, next_frame + i));
            });
            for (std::size_t i = 0; i < count; ++i) {
                ++point.frames;
                point.info_bits += k;
                point.bit_errors += outcomes[i].bit_errors;
                point.frame_errors += outcomes[i].frame_error;
                if (point.frame_errors >= cfg.stopping.min_frame_errors) {
                    stopped = true;
                    break;
                }
            }
            next_frame += count;
        }

        point.seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
        point.ber_defined = point.info_bits > 0;
        point.ber = point.ber_defined
                        ? static_cast<double>(point.bit_errors) / static_cast<double>(point.info_bits)
                        : 0.0;
        point.fer = static_cast<double>(point.frame_errors) / static_cast<double>(point.frames);
        result.points.push_back(point);
    }

    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path);
        if (!out) throw IoError("cannot open output file: " + cfg.output_path);
        write_csv(out, result);
        if (!out) throw IoError("failed writing output file: " + cfg.output_path);
    }
    return result;
}

inline void write_csv(std::ostream& os, const SimResult& r) {
    os << "# polarmod " << r.version << "\n";
    os << "# config_hash=" << std::hex << std::setfill('0') << std::setw(16)
       << r.config_hash << std::dec << std::setfill(' ') << "\n";
    os << "snr_db,snr_ref,frames,info_bits,bit_errors,frame_errors,ber,fer,seconds,"
          "ber_defined\n";
    for (const auto& p : r.points) {
        os << std::setprecision(17) << p.snr_db << ',' << to_string(p.snr_ref) << ','
           << p.frames << ',' << p.info_bits << ',' << p.bit_errors << ','
           << p.frame_errors << ',';
        if (p.ber_defined) os << std::setprecision(17) << p.ber;
        os << ',' << std::setprecision(17) << p.fer << ',' << std::setprecision(6)
           << p.seconds << ',' << (p.ber_defined ? 1 : 0) << "\n";
    }
}

inline SimResult parse_csv(std::istream& is) {
    SimResult r;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("config_hash=");
            if (pos != std::string::npos)
                r.config_hash = std::stoull(line.substr(pos + 12), nullptr, 16);
            continue;
        }
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        SnrPointResult p;
        auto next = [&]() {
            if (!std::getline(ss, field, ',')) throw IoError("csv: missing field");
            return field;
        };
        p.snr_db = std::stod(next());
        p.snr_ref = next() == "ebn0" ? SnrRef::ebn0 : SnrRef::esn0;
        p.frames = std::stoull(next());
        p.info_bits = std::stoull(next());
        p.bit_errors = std::stoull(next());
        p.frame_errors = std::stoull(next());
        const std::string ber_field = next();
        p.fer = std::stod(next());
        p.seconds = std::stod(next());
        p.ber_defined = next() == "1";
        p.ber = p.ber_defined && !ber_field.empty() ? std::stod(ber_field) : 0.0;
        r.points.push_back(p);
    }
    return r;
}

}  // namespace polarmod
