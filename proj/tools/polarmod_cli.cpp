// Command-line front end: frozen-set construction, BER/FER sweeps, the
// 4-QAM BICM/MLC equivalence check, and scheme summaries.
//
// Exit codes: 0 success, 2 configuration/usage error, 1 runtime error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polarmod/config.hpp"
#include "polarmod/version.hpp"

namespace {

using namespace polarmod;

struct CommonOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> output;
};

AppConfig load_with_overrides(const std::string& path, const CommonOverrides& ov) {
    AppConfig cfg = load_app_config(path);
    if (ov.seed) cfg.master_seed = *ov.seed;
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.output) cfg.output_path = *ov.output;
    return cfg;
}

int cmd_construct(const std::string& config_path, const CommonOverrides& ov) {
    AppConfig cfg = load_with_overrides(config_path, ov);
    const DesignResult design = build_design(cfg.scheme, cfg.design, cfg.workers);
    const nlohmann::json report = design_report_json(cfg, design);
    if (!cfg.output_path.empty()) {
        std::ofstream out(cfg.output_path);
        if (!out) throw IoError("cannot open output file: " + cfg.output_path);
        out << report.dump(2) << "\n";
    } else {
        std::cout << report.dump(2) << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& config_path, const CommonOverrides& ov) {
    AppConfig cfg = load_with_overrides(config_path, ov);
    const DesignResult design = build_design(cfg.scheme, cfg.design, cfg.workers);

    SimConfig sim;
    sim.scheme = design.scheme;
    sim.snr_db = cfg.snr_db;
    sim.snr_ref = cfg.snr_ref;
    sim.stopping = cfg.stopping;
    sim.master_seed = cfg.master_seed;
    sim.workers = cfg.workers;
    sim.output_path = cfg.output_path;
    sim.config_echo = cfg.canonical;
    if (sim.snr_db.empty()) throw ConfigError("snr.points_db: required for simulate");

    const SimResult result = run_simulation(sim);
    write_csv(std::cout, result);
    return 0;
}

int cmd_equivalence(std::size_t n_sym, std::size_t k, std::size_t trials, std::uint64_t seed,
                    double esn0_db, const std::string& estimator, double bec_eps) {
    DesignSpec design;
    design.esn0_db = esn0_db;
    design.bec_eps = bec_eps;
    design.k_total = k;
    if (estimator == "bec") design.estimator = Estimator::bec;
    else if (estimator == "ga") design.estimator = Estimator::ga;
    else if (estimator == "mc") design.estimator = Estimator::mc;
    else throw ConfigError("estimator: expected bec, ga or mc");
    const EquivalenceReport report = equivalence_check_4qam(n_sym, k, design, trials, seed);
    std::cout << equivalence_report_json(report).dump(2) << "\n";
    return 0;
}

int cmd_info(const std::string& config_path, const CommonOverrides& ov) {
    AppConfig cfg = load_with_overrides(config_path, ov);
    const DesignResult design = build_design(cfg.scheme, cfg.design, cfg.workers);
    const SchemeConfig& s = design.scheme;
    std::printf("scheme:            %s\n", s.kind == SchemeKind::mlc ? "mlc" : "bicm");
    std::printf("symbols per frame: %zu (structural delay)\n", s.n_sym);
    std::printf("bits per symbol:   %zu (%s, %s labeling)\n", s.m(),
                s.constellation.is_complex ? "qam" : "ask",
                s.constellation.labeling == Labeling::gray ? "gray" : "natural");
    std::printf("info bits K:       %zu of %zu bit channels\n", s.k_total(),
                s.total_bit_channels());
    std::printf("rate:              %.6f info bits/symbol (code rate %.6f)\n",
                s.rate_bits_per_symbol(),
                static_cast<double>(s.k_total()) / static_cast<double>(s.total_bit_channels()));
    std::printf("esn0 = ebn0 %+.4f dB\n",
                10.0 * std::log10(std::max(s.rate_bits_per_symbol(), 1e-300)));
    for (std::size_t l = 0; l < design.k_per_level.size(); ++l) {
        const std::size_t n = design.masks[l].size();
        std::printf("level %zu:           K=%zu, frozen=%zu of %zu\n", l,
                    design.k_per_level[l], n - design.k_per_level[l], n);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polar-coded modulation toolkit"};
    app.set_version_flag("--version", polarmod::kVersion);
    app.require_subcommand(1);

    CommonOverrides ov;
    std::string config_path;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "JSON config file (schema v1)")
                ->required();
        sub->add_option("--seed", ov.seed, "override master seed");
        sub->add_option("--workers", ov.workers, "override worker count");
        sub->add_option("--output", ov.output, "override output path");
    };

    CLI::App* construct = app.add_subcommand(
        "construct", "emit reliabilities and frozen masks as JSON");
    add_common(construct, true);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "run a BER/FER sweep and write CSV");
    add_common(simulate, true);

    std::size_t eq_n_sym = 64, eq_k = 64, eq_trials = 1000;
    std::uint64_t eq_seed = 7;
    double eq_esn0 = 3.0, eq_eps = 0.5;
    std::string eq_estimator = "ga";
    CLI::App* equivalence = app.add_subcommand(
        "equivalence", "4-QAM BICM/MLC equivalence check, JSON report");
    equivalence->add_option("--n-sym", eq_n_sym, "symbols per frame (power of two)");
    equivalence->add_option("--k", eq_k, "total info bits");
    equivalence->add_option("--trials", eq_trials, "number of common realizations");
    equivalence->add_option("--seed", eq_seed, "trial seed");
    equivalence->add_option("--esn0", eq_esn0, "design/channel Es/N0 in dB");
    equivalence->add_option("--estimator", eq_estimator, "bec, ga or mc");
    equivalence->add_option("--bec-eps", eq_eps, "erasure probability for bec");

    CLI::App* info = app.add_subcommand("info", "print a scheme summary");
    add_common(info, true);

    try {
        app.parse(argc, argv);
        if (construct->parsed()) return cmd_construct(config_path, ov);
        if (simulate->parsed()) return cmd_simulate(config_path, ov);
        if (equivalence->parsed())
            return cmd_equivalence(eq_n_sym, eq_k, eq_trials, eq_seed, eq_esn0, eq_estimator,
                                   eq_eps);
        if (info->parsed()) return cmd_info(config_path, ov);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints usage or help text
        return rc == 0 ? 0 : 2;
    } catch (const polarmod::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
