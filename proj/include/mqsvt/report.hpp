#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "mqsvt/benchmarks.hpp"

namespace mqsvt {

/// Common report envelope: every report embeds the resolved config, the
/// code version, and the master seed, and serializes with fixed key
/// order so identical runs are byte-identical.
inline nlohmann::ordered_json report_envelope(const std::string& quantity, const EnsembleConfig& cfg) {
    nlohmann::ordered_json j;
    j["quantity"] = quantity;
    j["code_version"] = kCodeVersion;
    j["n"] = cfg.n;
    j["d_U"] = cfg.d_u;
    j["d"] = cfg.d;
    j["seed"] = cfg.master_seed;
    j["samples"] = cfg.circuits;
    j["architecture"] = "uniform_matching";
    return j;
}

inline nlohmann::ordered_json to_json(const BenchmarkReport& r, const EnsembleConfig& cfg) {
    nlohmann::ordered_json j = report_envelope(r.quantity, cfg);
    j["estimate"] = r.estimate;
    j["stderr"] = r.stderr_;
    if (r.analytic_reference) j["analytic_reference"] = *r.analytic_reference;
    if (r.exact_reference) j["exact_reference"] = *r.exact_reference;
    j["normalization"] = r.normalization;
    if (r.has_verdict) j["verdict"] = r.pass ? "pass" : "fail";
    if (!r.extra.is_null()) j["detail"] = r.extra;
    return j;
}

inline nlohmann::ordered_json to_json(const SpoofExperimentReport& rep) {
    nlohmann::ordered_json j = report_envelope("sxes_spoof", rep.cfg);
    j["trajectories"] = rep.trajectories;
    j["pexp_convention"] = "conditional_top0";
    j["threshold_reference"] = rep.threshold_reference;
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (const auto& p : rep.points) {
        pts.push_back({{"gamma", p.gamma},
                       {"spoofer_sxes", p.spoofer_sxes},
                       {"spoofer_stderr", p.spoofer_stderr},
                       {"noisy_sxes", p.noisy_sxes},
                       {"noisy_stderr", p.noisy_stderr},
                       {"noisy_sxes_joint", p.noisy_sxes_joint},
                       {"noisy_joint_stderr", p.noisy_joint_stderr},
                       {"margin", p.margin},
                       {"margin_stderr", p.margin_stderr},
                       {"spoofer_wins_3sigma", p.spoofer_wins_3sigma}});
    }
    j["points"] = std::move(pts);
    if (rep.crossover_gamma) {
        j["crossover_gamma"] = *rep.crossover_gamma;
    } else {
        j["crossover_gamma"] = nullptr;
    }
    return j;
}

/// Long-format CSV of a gamma sweep for plotting.
inline std::string spoof_csv(const SpoofExperimentReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "gamma,series,value,stderr\n";
    for (const auto& p : rep.points) {
        os << p.gamma << ",spoofer," << p.spoofer_sxes << "," << p.spoofer_stderr << "\n";
        os << p.gamma << ",noisy," << p.noisy_sxes << "," << p.noisy_stderr << "\n";
        os << p.gamma << ",noisy_joint," << p.noisy_sxes_joint << "," << p.noisy_joint_stderr << "\n";
        os << p.gamma << ",margin," << p.margin << "," << p.margin_stderr << "\n";
    }
    return os.str();
}

}  // namespace mqsvt
