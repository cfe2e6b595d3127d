// Command-line driver: every subcommand maps onto one reproducible
// experiment and writes a JSON (or CSV) report. Exit codes: 0 = pass,
// 1 = usage error, 2 = scientific verdict failed.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "mqsvt/benchmarks.hpp"
#include "mqsvt/circuit.hpp"
#include "mqsvt/report.hpp"
#include "mqsvt/verify.hpp"

namespace {

struct CommonOpts {
    int n = 3;
    int du = 1;
    int d = 1;
    std::int64_t circuits = 10000;
    std::int64_t trajectories = 200;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double tol = 1e-9;
    std::string format = "json";
    std::string out;
    int workers = 1;
};

void add_common(CLI::App* app, CommonOpts& o) {
    app->add_option("--n", o.n, "output bits (n+1 registers, even)");
    app->add_option("--du", o.du, "depth of U");
    app->add_option("--d", o.d, "block count");
    app->add_option("--circuits", o.circuits, "ensemble size");
    app->add_option("--trajectories", o.trajectories, "noise trajectories per circuit");
    app->add_option("--seed", o.seed, "master seed (required for stochastic runs)")
        ->each([&o](const std::string&) { o.seed_set = true; });
    app->add_option("--tol", o.tol, "tolerance");
    app->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--out", o.out, "output path (default stdout)");
    app->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 64));
}

int emit(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open " << o.out << "\n";
            return 1;
        }
        f << text << "\n";
    }
    return 0;
}

mqsvt::EnsembleConfig make_cfg(const CommonOpts& o) {
    mqsvt::EnsembleConfig cfg;
    cfg.n = o.n;
    cfg.d_u = o.du;
    cfg.d = o.d;
    cfg.circuits = o.circuits;
    cfg.master_seed = o.seed;
    cfg.workers = o.workers;
    return cfg;
}

int require_seed(const CommonOpts& o) {
    if (!o.seed_set) {
        std::cerr << "--seed is required for stochastic runs\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mQSVT circuit benchmarking: Pauli-path spoofing, exact simulation, Haar moments"};
    app.require_subcommand(1);

    CommonOpts o;
    std::int64_t mc_samples = 200000;
    bool exact_only = false;
    std::string gammas_csv = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    bool trivial_estimator = false;

    auto* moments = app.add_subcommand("moments", "Haar-moment engine checks");
    auto* mverify = moments->add_subcommand("verify", "table vs Weingarten sum vs Monte-Carlo");
    add_common(mverify, o);
    mverify->add_option("--samples", mc_samples, "Haar samples per case");
    mverify->add_flag("--exact-only", exact_only, "skip the Monte-Carlo cross-check");

    auto* paths = app.add_subcommand("paths", "Pauli-path checks");
    auto* sumcheck = paths->add_subcommand("sum-check", "path-sum completeness on tiny instances");
    add_common(sumcheck, o);
    auto* f2 = paths->add_subcommand("f2", "second moment of the canonical-path coefficient");
    add_common(f2, o);

    auto* sxq = app.add_subcommand("sxq", "mean-squared-error improvement of the spoofer");
    auto* sxq_est = sxq->add_subcommand("estimate", "ensemble sXQ vs the printed lower bound");
    add_common(sxq_est, o);
    sxq_est->add_flag("--trivial-estimator", trivial_estimator, "score the uniform guess instead");

    auto* sxes = app.add_subcommand("sxes", "system linear cross-entropy score");
    auto* spoof = sxes->add_subcommand("spoof", "spoofer vs depolarized circuit across a gamma sweep");
    add_common(spoof, o);
    spoof->add_option("--gammas", gammas_csv, "comma-separated gamma sweep");

    auto* circuit = app.add_subcommand("circuit", "circuit utilities");
    auto* dump = circuit->add_subcommand("dump", "serialize one sampled circuit as JSON");
    add_common(dump, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // all parse problems are usage errors
    }

    try {
        if (mverify->parsed()) {
            if (!exact_only && require_seed(o)) return 1;
            const auto res = mqsvt::moments_verify(mc_samples, o.seed, exact_only, o.workers);
            auto j = mqsvt::to_json(res);
            j["seed"] = o.seed;
            j["samples"] = exact_only ? 0 : mc_samples;
            const int rc = emit(o, j.dump(2));
            if (rc) return rc;
            return (res.engine_consistent && res.mc_consistent) ? 0 : 2;
        }
        if (sumcheck->parsed()) {
            if (require_seed(o)) return 1;
            const auto res = mqsvt::path_sum_check(o.n + 1, o.du, static_cast<int>(o.circuits), o.tol, o.seed);
            const int rc = emit(o, mqsvt::to_json(res).dump(2));
            if (rc) return rc;
            return res.pass ? 0 : 2;
        }
        if (f2->parsed()) {
            if (require_seed(o)) return 1;
            const auto cfg = make_cfg(o);
            const auto rep = mqsvt::second_moment_estimate(cfg);
            auto j = mqsvt::to_json(rep, cfg);
            const int rc = emit(o, j.dump(2));
            if (rc) return rc;
            return rep.pass ? 0 : 2;
        }
        if (sxq_est->parsed()) {
            if (require_seed(o)) return 1;
            const auto cfg = make_cfg(o);
            const auto rep = mqsvt::sxq_estimate(cfg, trivial_estimator);
            const int rc = emit(o, mqsvt::to_json(rep, cfg).dump(2));
            if (rc) return rc;
            return rep.pass ? 0 : 2;
        }
        if (spoof->parsed()) {
            if (require_seed(o)) return 1;
            std::vector<double> gammas;
            std::stringstream ss(gammas_csv);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!tok.empty()) gammas.push_back(std::stod(tok));
            }
            if (gammas.empty()) {
                std::cerr << "empty gamma list\n";
                return 1;
            }
            const auto cfg = make_cfg(o);
            const auto rep = mqsvt::sxes_spoof_experiment(cfg, gammas, o.trajectories);
            const std::string text = (o.format == "csv") ? mqsvt::spoof_csv(rep) : mqsvt::to_json(rep).dump(2);
            const int rc = emit(o, text);
            if (rc) return rc;
            return 0;  // a completed sweep is the product; verdicts live in the report
        }
        if (dump->parsed()) {
            if (require_seed(o)) return 1;
            const auto circ = mqsvt::sample_circuit(o.n + 1, o.du, o.d, o.seed, 0);
            auto j = mqsvt::to_json(circ);
            j["seed"] = o.seed;
            j["code_version"] = mqsvt::kCodeVersion;
            return emit(o, j.dump(2));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
