/*
JSON configuration (schema "v1") and report serialization for the CLI.

Document layout:

  {
    "version": "v1",
    "scheme": {
      "kind": "bpsk" | "mlc" | "bicm",
      "n_sym": 256,
      "constellation": {"type": "ask"|"qam", "m": 4, "labeling": "gray"|"natural"},
      "interleaver": {"kind": "identity"|"seeded_random", "seed": 1}
    },
    "construction": {
      "estimator": "bec"|"ga"|"mc",
      "design_esn0_db": 6.0,
      "bec_eps": 0.5,
      "k_total": 512,
      "mc_trials": 10000,
      "seed": 7
    },
    "snr": {"points_db": [0.0, 1.0], "reference": "ebn0"|"esn0"},
    "stopping": {"min_frame_errors": 100, "max_frames": 10000000},
    "master_seed": 42,
    "workers": 2,
    "output": "results.csv"
  }

Unknown enum strings and missing required fields raise ConfigError with the
field path. The scheme block is required; everything below "snr" has the
defaults shown by polarmod info.
*/

#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "polarmod/design.hpp"
#include "polarmod/equivalence.hpp"
#include "polarmod/sim.hpp"

namespace polarmod {

struct AppConfig {
    SchemeDescriptor scheme;
    DesignSpec design;
    std::vector<double> snr_db;
    SnrRef snr_ref = SnrRef::ebn0;
    StoppingRule stopping;
    std::uint64_t master_seed = 1;
    unsigned workers = 1;
    std::string output_path;
    std::string canonical;  // compact dump of the parsed document
};

namespace cfg_detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(path + key + ": required field is missing");
    return j.at(key);
}

template <class T>
T number(const json& j, const char* key, const std::string& path, T fallback,
         bool required = false) {
    if (!j.is_object() || !j.contains(key)) {
        if (required) throw ConfigError(path + key + ": required field is missing");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number())
        throw ConfigError(path + key + ": expected a number");
    return v.get<T>();
}

inline std::string text(const json& j, const char* key, const std::string& path,
                        const std::string& fallback, bool required = false) {
    if (!j.is_object() || !j.contains(key)) {
        if (required) throw ConfigError(path + key + ": required field is missing");
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError(path + key + ": expected a string");
    return v.get<std::string>();
}

}  // namespace cfg_detail

inline AppConfig parse_app_config(const nlohmann::json& doc) {
    using namespace cfg_detail;
    AppConfig cfg;
    const std::string version = text(doc, "version", "", "v1");
    if (version != "v1") throw ConfigError("version: unsupported config version " + version);

    const json& scheme = require(doc, "scheme", "");
    const std::string kind = text(scheme, "kind", "scheme.", "", true);
    if (kind == "bpsk") cfg.scheme.kind = DesignKind::bpsk;
    else if (kind == "mlc") cfg.scheme.kind = DesignKind::mlc;
    else if (kind == "bicm") cfg.scheme.kind = DesignKind::bicm;
    else throw ConfigError("scheme.kind: expected bpsk, mlc or bicm");
    cfg.scheme.n_sym = number<std::size_t>(scheme, "n_sym", "scheme.", 0, true);

    if (cfg.scheme.kind != DesignKind::bpsk) {
        const json& con = require(scheme, "constellation", "scheme.");
        const std::string type = text(con, "type", "scheme.constellation.", "", true);
        if (type == "ask") cfg.scheme.constellation.qam = false;
        else if (type == "qam") cfg.scheme.constellation.qam = true;
        else throw ConfigError("scheme.constellation.type: expected ask or qam");
        cfg.scheme.constellation.m =
            number<std::size_t>(con, "m", "scheme.constellation.", 0, true);
        const std::string deflab = cfg.scheme.kind == DesignKind::mlc ? "natural" : "gray";
        const std::string lab = text(con, "labeling", "scheme.constellation.", deflab);
        if (lab == "gray") cfg.scheme.constellation.labeling = Labeling::gray;
        else if (lab == "natural") cfg.scheme.constellation.labeling = Labeling::natural;
        else throw ConfigError("scheme.constellation.labeling: expected gray or natural");
        if (cfg.scheme.kind == DesignKind::mlc &&
            cfg.scheme.constellation.labeling != Labeling::natural)
            throw ConfigError("scheme.constellation.labeling: mlc requires natural labeling");
    }
    if (scheme.contains("interleaver")) {
        const json& il = scheme.at("interleaver");
        const std::string ik = text(il, "kind", "scheme.interleaver.", "identity");
        if (ik == "identity") cfg.scheme.interleaver.kind = InterleaverDescriptor::Kind::identity;
        else if (ik == "seeded_random") {
            cfg.scheme.interleaver.kind = InterleaverDescriptor::Kind::seeded_random;
            cfg.scheme.interleaver.seed =
                number<std::uint64_t>(il, "seed", "scheme.interleaver.", 0, true);
        } else
            throw ConfigError("scheme.interleaver.kind: expected identity or seeded_random");
    }

    const json& con = require(doc, "construction", "");
    const std::string est = text(con, "estimator", "construction.", "ga");
    if (est == "bec") cfg.design.estimator = Estimator::bec;
    else if (est == "ga") cfg.design.estimator = Estimator::ga;
    else if (est == "mc") cfg.design.estimator = Estimator::mc;
    else throw ConfigError("construction.estimator: expected bec, ga or mc");
    cfg.design.esn0_db = number<double>(con, "design_esn0_db", "construction.", 0.0,
                                        cfg.design.estimator != Estimator::bec);
    cfg.design.bec_eps = number<double>(con, "bec_eps", "construction.", 0.5,
                                        cfg.design.estimator == Estimator::bec);
    cfg.design.k_total = number<std::size_t>(con, "k_total", "construction.", 0, true);
    cfg.design.mc_trials = number<std::size_t>(con, "mc_trials", "construction.", 10000);
    cfg.design.seed = number<std::uint64_t>(con, "seed", "construction.", 1);

    if (doc.contains("snr")) {
        const json& snr = doc.at("snr");
        const json& pts = require(snr, "points_db", "snr.");
        if (!pts.is_array() || pts.empty())
            throw ConfigError("snr.points_db: expected a non-empty array");
        for (const auto& p : pts) {
            if (!p.is_number()) throw ConfigError("snr.points_db: expected numbers");
            cfg.snr_db.push_back(p.get<double>());
        }
        const std::string ref = text(snr, "reference", "snr.", "ebn0");
        if (ref == "ebn0") cfg.snr_ref = SnrRef::ebn0;
        else if (ref == "esn0") cfg.snr_ref = SnrRef::esn0;
        else throw ConfigError("snr.reference: expected ebn0 or esn0");
    }
    if (doc.contains("stopping")) {
        const json& st = doc.at("stopping");
        cfg.stopping.min_frame_errors =
            number<std::size_t>(st, "min_frame_errors", "stopping.", 100);
        cfg.stopping.max_frames = number<std::size_t>(st, "max_frames", "stopping.", 10'000'000);
    }
    cfg.master_seed = number<std::uint64_t>(doc, "master_seed", "", 1);
    cfg.workers = number<unsigned>(doc, "workers", "", 1);
    cfg.output_path = text(doc, "output", "", "");
    cfg.canonical = doc.dump();
    return cfg;
}

inline AppConfig load_app_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return parse_app_config(doc);
}

inline nlohmann::json design_report_json(const AppConfig& cfg, const DesignResult& design) {
    nlohmann::json j;
    j["scheme"]["kind"] = cfg.scheme.kind == DesignKind::bpsk  ? "bpsk"
                          : cfg.scheme.kind == DesignKind::mlc ? "mlc"
                                                               : "bicm";
    j["scheme"]["n_sym"] = cfg.scheme.n_sym;
    j["scheme"]["m"] = design.scheme.m();
    j["estimator"] = design.reliability.source == Estimator::bec  ? "bec"
                     : design.reliability.source == Estimator::ga ? "ga"
                                                                  : "mc";
    j["design_point"] = design.reliability.design_point;
    j["estimates"] = design.reliability.estimates;
    j["k_per_level"] = design.k_per_level;
    if (design.masks.size() == 1) {
        j["frozen_mask"] = design.masks[0];
    } else {
        j["frozen_masks"] = design.masks;
    }
    return j;
}

inline nlohmann::json equivalence_report_json(const EquivalenceReport& r) {
    nlohmann::json j;
    j["label_identity_ok"] = r.label_identity_ok;
    j["trials_run"] = r.trials_run;
    j["decisions_equal"] = r.decisions_equal;
    j["max_llr_gap"] = r.max_llr_gap;
    return j;
}

}  // namespace polarmod
