#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqsvt/circuit.hpp"
#include "mqsvt/moments.hpp"
#include "mqsvt/parallel.hpp"
#include "mqsvt/paulipath.hpp"
#include "mqsvt/rational.hpp"
#include "mqsvt/statevector.hpp"

namespace mqsvt {

inline constexpr const char* kCodeVersion = "mqsvt 0.1.0";

// ---------------------------------------------------------------------------
// Scores. Probability maps are arrays over x = 0..2^n-1; the x = 0^n
// entry is ignored by the sums.
// ---------------------------------------------------------------------------

/// sXES = sum_{x != 0^n} p(x) * p_exp(x).
inline double sxes_score(std::span<const double> p, std::span<const double> p_exp) {
    if (p.size() != p_exp.size() || p.empty()) throw std::invalid_argument("sxes_score: domain mismatch");
    double s = 0;
    for (std::size_t x = 1; x < p.size(); ++x) s += p[x] * p_exp[x];
    return s;
}

/// XEB = 2^n * sXES - 1.
inline double xeb_score(std::span<const double> p, std::span<const double> p_exp, int n) {
    if (p.size() != (std::size_t{1} << n)) throw std::invalid_argument("xeb_score: wrong map size");
    return std::ldexp(sxes_score(p, p_exp), n) - 1.0;
}

/// (1/k) sum p(x_j) > b / 2^n over k distinct nonzero strings.
inline bool xhog_check(std::span<const std::uint64_t> strings,
                       const std::function<double(std::uint64_t)>& p, double b, int n) {
    if (b <= 1.0) throw std::invalid_argument("xhog_check: b must be > 1");
    std::set<std::uint64_t> seen;
    for (std::uint64_t x : strings) {
        if (x == 0) throw std::invalid_argument("xhog_check: 0^n not allowed");
        if (!seen.insert(x).second) throw std::invalid_argument("xhog_check: duplicate string");
    }
    if (strings.empty()) throw std::invalid_argument("xhog_check: empty string set");
    double s = 0;
    for (std::uint64_t x : strings) s += p(x);
    return s / static_cast<double>(strings.size()) > b / std::ldexp(1.0, n);
}

/// At least 2/3 of the probabilities exceed the median (>= convention).
inline bool hog_check(std::span<const std::uint64_t> strings,
                      const std::function<double(std::uint64_t)>& p, double median) {
    if (median < 0) throw std::invalid_argument("hog_check: median must be >= 0");
    if (strings.empty()) return false;
    std::size_t above = 0;
    for (std::uint64_t x : strings) {
        if (p(x) > median) ++above;
    }
    return 3 * above >= 2 * strings.size();
}

// ---------------------------------------------------------------------------
// Closed-form reference quantities. The *_printed forms evaluate the
// published formulas verbatim; the *_exact forms are derived from the
// order-4 Weingarten engine. They disagree (see moments.hpp); reports
// carry both.
// ---------------------------------------------------------------------------

/// gamma(d_U) = (2^8 Delta)^{-d_U} * 95232 * 90048^{d_U-1}, as printed.
inline Rational analytic_gamma(int d_u) {
    if (d_u < 1) throw std::invalid_argument("analytic_gamma: d_U >= 1");
    Rational g = rational(95232, kT4Denominator);
    for (int j = 1; j < d_u; ++j) g *= rational(90048, kT4Denominator);
    return g;
}

/// Per-layer product of true order-4 moments along the canonical path:
/// G(ZZ,ZI,ZZ,ZI;ZI,ZI,ZI,ZI) * G(ZI,..;ZI,..)^{d_U-1}.
inline Rational gamma_exact(int d_u) {
    if (d_u < 1) throw std::invalid_argument("gamma_exact: d_U >= 1");
    const int zi = pauli2_code("ZI"), zz = pauli2_code("ZZ");
    static const Rational first = moment_t4_weingarten({zz, zi, zz, zi}, {zi, zi, zi, zi});
    static const Rational later = moment_t4_weingarten({zi, zi, zi, zi}, {zi, zi, zi, zi});
    Rational g = first;
    for (int j = 1; j < d_u; ++j) g *= later;
    return g;
}

/// sum_{x != 0} E[F^2] = ((2^n - 1) / 2^{2(n+1)}) * gamma.
inline Rational f2_sum_from_gamma(int n, const Rational& gamma) {
    return gamma * Rational(BigInt((std::int64_t{1} << n) - 1), BigInt(std::int64_t{1} << (2 * n + 2)));
}

inline Rational analytic_f2_sum(int n, int d_u) {
    if (n < 1) throw std::invalid_argument("analytic_f2_sum: n >= 1");
    return f2_sum_from_gamma(n, analytic_gamma(d_u));
}

inline Rational exact_f2_sum(int n, int d_u) { return f2_sum_from_gamma(n, gamma_exact(d_u)); }

namespace detail {
inline BigInt ipow(std::int64_t base, int e) {
    BigInt b(base), r(1);
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}
}  // namespace detail

/// Printed lower bound for sum_{x!=0} sum_{s!=r} E[F_s F_r]:
/// ((2^{n-1}-1)*178304*602048^{d_U-1} + (2^{n-1}*242560 - 2*168896)*90048^{d_U-1})
///   / (2^{2n+2} * (2^8 Delta)^{d_U}).
inline Rational analytic_cross_term_lb(int n, int d_u) {
    if (n < 2) throw std::invalid_argument("analytic_cross_term_lb: stated for n >= 2 only");
    if (d_u < 1) throw std::invalid_argument("analytic_cross_term_lb: d_U >= 1");
    const BigInt half = BigInt(1) << (n - 1);
    const BigInt num = (half - 1) * 178304 * detail::ipow(602048, d_u - 1) +
                       (half * 242560 - 2 * 168896) * detail::ipow(90048, d_u - 1);
    const BigInt den = (BigInt(1) << (2 * n + 2)) * detail::ipow(kT4Denominator, d_u);
    return Rational(num, den);
}

/// Printed two-term sXQ lower bound (Def-7 normalization):
/// (1/(2^n-1)) [ ((2^n-1)/2^2) * 95232*90048^{d_U-1}/(2^8 Delta)^{d_U}
///             + ((2^{n-1}-1)*178304*602048^{d_U-1}
///                + (2^{n-1}*242560-2*168896)*90048^{d_U-1}) / (2^2 (2^8 Delta)^{d_U}) ].
inline Rational analytic_sxq_lb(int n, int d_u) {
    if (n < 2) throw std::invalid_argument("analytic_sxq_lb: n >= 2");
    const BigInt pow2n = BigInt(1) << n;
    const Rational first = Rational(pow2n - 1, BigInt(4)) * analytic_gamma(d_u);
    const BigInt half = BigInt(1) << (n - 1);
    const BigInt num = (half - 1) * 178304 * detail::ipow(602048, d_u - 1) +
                       (half * 242560 - 2 * 168896) * detail::ipow(90048, d_u - 1);
    const Rational second(num, BigInt(4) * detail::ipow(kT4Denominator, d_u));
    return (first + second) / Rational(pow2n - 1);
}

// ---------------------------------------------------------------------------
// Ensemble estimators.
// ---------------------------------------------------------------------------

struct EnsembleConfig {
    int n = 3;
    int d_u = 1;
    int d = 1;
    std::int64_t circuits = 10000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    int batches = 32;  // >= 30 batch means for stderr
};

inline void validate(const EnsembleConfig& cfg) {
    if (cfg.n < 1 || (cfg.n + 1) % 2 != 0) throw std::invalid_argument("n must be odd-plus-one... n+1 even, n >= 1");
    if (cfg.n + 1 > kMaxRegisters) throw std::invalid_argument("n+1 above register cap");
    if (cfg.d_u < 1 || cfg.d < 1 || cfg.circuits < 1) throw std::invalid_argument("bad ensemble config");
    if (cfg.batches < 30) throw std::invalid_argument("need >= 30 stderr batches");
}

struct BenchmarkReport {
    std::string quantity;
    double estimate = 0;
    double stderr_ = 0;
    std::int64_t samples = 0;
    std::optional<double> analytic_reference;
    std::optional<double> exact_reference;
    std::string normalization;
    bool has_verdict = false;
    bool pass = false;
    nlohmann::ordered_json extra;  // quantity-specific fields
};

namespace detail {

/// Deterministic batched mean/stderr over per-circuit statistics.
struct BatchStats {
    double mean = 0, stderr_ = 0;
};

inline BatchStats batch_stats(const std::vector<double>& per_item, int batches) {
    const std::int64_t n = static_cast<std::int64_t>(per_item.size());
    const int b = static_cast<int>(std::min<std::int64_t>(batches, n));
    std::vector<double> bm(static_cast<std::size_t>(b), 0.0);
    std::vector<std::int64_t> bc(static_cast<std::size_t>(b), 0);
    for (std::int64_t i = 0; i < n; ++i) {
        const int which = static_cast<int>(i * b / n);
        bm[static_cast<std::size_t>(which)] += per_item[static_cast<std::size_t>(i)];
        bc[static_cast<std::size_t>(which)] += 1;
    }
    double mean = 0;
    for (double v : bm) mean += v;
    mean /= static_cast<double>(n);
    double var = 0;
    for (int i = 0; i < b; ++i) {
        const double m = bm[static_cast<std::size_t>(i)] / static_cast<double>(bc[static_cast<std::size_t>(i)]);
        var += (m - mean) * (m - mean);
    }
    var /= static_cast<double>(b - 1) * static_cast<double>(b);
    return {mean, std::sqrt(var)};
}

/// Runs fn over the circuit ensemble, collecting one vector<double> of
/// per-circuit statistics per slot; deterministic for any worker count.
inline std::vector<std::vector<double>> ensemble_collect(
    const EnsembleConfig& cfg, int slots,
    const std::function<void(std::int64_t, const MqsvtCircuit&, std::span<double>)>& fn) {
    struct Chunk {
        std::vector<std::vector<double>> vals;
    };
    constexpr std::int64_t kChunk = 256;
    const std::int64_t nchunks = (cfg.circuits + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(slots));
    for (auto& v : out) v.resize(static_cast<std::size_t>(cfg.circuits));
    parallel_map_reduce<int>(
        nchunks, cfg.workers,
        [&](std::int64_t chunk) {
            const std::int64_t lo = chunk * kChunk;
            const std::int64_t hi = std::min(cfg.circuits, lo + kChunk);
            std::vector<double> slot_vals(static_cast<std::size_t>(slots));
            for (std::int64_t c = lo; c < hi; ++c) {
                const MqsvtCircuit circ =
                    sample_circuit(cfg.n + 1, cfg.d_u, cfg.d, cfg.master_seed, static_cast<std::uint64_t>(c));
                fn(c, circ, slot_vals);
                for (int s = 0; s < slots; ++s) out[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)] = slot_vals[static_cast<std::size_t>(s)];
            }
            return 0;
        },
        [](int, int) { return 0; });
    return out;
}

}  // namespace detail

/// Monte-Carlo sXQ of the canonical Pauli-path estimator, reported in
/// both normalizations (Def-7 2^{2n} prefactor and the plain form).
/// A trivial estimator (q = 2^{-n}) yields exactly 0.
inline BenchmarkReport sxq_estimate(const EnsembleConfig& cfg, bool trivial_estimator = false) {
    validate(cfg);
    const double u = std::ldexp(1.0, -cfg.n);
    const std::uint64_t xcount = std::uint64_t{1} << cfg.n;
    auto vals = detail::ensemble_collect(
        cfg, 1, [&](std::int64_t, const MqsvtCircuit& circ, std::span<double> slot) {
            const StateVector s = evolve(circ);
            const double q = trivial_estimator ? u : spoof_probability(circ, 1);
            double acc = 0;
            for (std::uint64_t x = 1; x < xcount; ++x) {
                const double p = std::norm(s.amp[x]);
                acc += (p - u) * (p - u) - (p - q) * (p - q);
            }
            slot[0] = acc / static_cast<double>(xcount - 1);
        });
    const auto st = detail::batch_stats(vals[0], cfg.batches);
    const double pref = std::ldexp(1.0, 2 * cfg.n);
    BenchmarkReport r;
    r.quantity = "sxq";
    r.estimate = pref * st.mean;
    r.stderr_ = pref * st.stderr_;
    r.samples = cfg.circuits;
    r.normalization = "def7_2^2n";
    if (cfg.n >= 2) r.analytic_reference = to_double(analytic_sxq_lb(cfg.n, cfg.d_u));
    r.has_verdict = true;
    r.pass = (r.estimate > 3 * r.stderr_) &&
             (!r.analytic_reference || r.estimate >= *r.analytic_reference - 3 * r.stderr_);
    r.extra["main_text_estimate"] = st.mean;
    r.extra["main_text_stderr"] = st.stderr_;
    r.extra["estimator"] = trivial_estimator ? "trivial_uniform" : "pauli_path";
    return r;
}

/// Ensemble mean of F(U, r, x) (x-independent along the canonical path).
inline BenchmarkReport first_moment_estimate(const EnsembleConfig& cfg) {
    validate(cfg);
    auto vals = detail::ensemble_collect(cfg, 1, [&](std::int64_t, const MqsvtCircuit& circ, std::span<double> slot) {
        slot[0] = canonical_fourier_coefficient(circ);
    });
    const auto st = detail::batch_stats(vals[0], cfg.batches);
    BenchmarkReport r;
    r.quantity = "first_moment_F";
    r.estimate = st.mean;
    r.stderr_ = st.stderr_;
    r.samples = cfg.circuits;
    r.analytic_reference = 0.0;
    r.normalization = "plain";
    r.has_verdict = true;
    r.pass = std::abs(st.mean) <= 3 * st.stderr_;
    return r;
}

/// Ensemble estimate of sum_{x != 0} E[F^2], compared against both the
/// printed and the engine-derived closed forms.
inline BenchmarkReport second_moment_estimate(const EnsembleConfig& cfg) {
    validate(cfg);
    const double xm1 = std::ldexp(1.0, cfg.n) - 1.0;
    auto vals = detail::ensemble_collect(cfg, 1, [&](std::int64_t, const MqsvtCircuit& circ, std::span<double> slot) {
        const double f = canonical_fourier_coefficient(circ);
        slot[0] = xm1 * f * f;
    });
    const auto st = detail::batch_stats(vals[0], cfg.batches);
    BenchmarkReport r;
    r.quantity = "f2_sum";
    r.estimate = st.mean;
    r.stderr_ = st.stderr_;
    r.samples = cfg.circuits;
    r.analytic_reference = to_double(analytic_f2_sum(cfg.n, cfg.d_u));
    r.exact_reference = to_double(exact_f2_sum(cfg.n, cfg.d_u));
    r.normalization = "plain";
    r.has_verdict = true;
    r.pass = std::abs(st.mean - *r.analytic_reference) <= 3 * st.stderr_;
    r.extra["pass_vs_exact"] = std::abs(st.mean - *r.exact_reference) <= 3 * st.stderr_;
    return r;
}

/// Per-x ensemble mean of p(U, x), with stderr.
struct MeanOutputReport {
    int n = 0;
    std::int64_t circuits = 0;
    std::vector<double> mean;    // indexed by x
    std::vector<double> stderr_;
    bool uniform_within_3sigma = true;  // vs 2^{-(n+1)} for every x
};

inline MeanOutputReport mean_output_probability(const EnsembleConfig& cfg) {
    validate(cfg);
    const std::uint64_t xcount = std::uint64_t{1} << cfg.n;
    auto vals = detail::ensemble_collect(
        cfg, static_cast<int>(xcount), [&](std::int64_t, const MqsvtCircuit& circ, std::span<double> slot) {
            const StateVector s = evolve(circ);
            for (std::uint64_t x = 0; x < xcount; ++x) slot[x] = std::norm(s.amp[x]);
        });
    MeanOutputReport rep;
    rep.n = cfg.n;
    rep.circuits = cfg.circuits;
    const double target = std::ldexp(1.0, -(cfg.n + 1));
    for (std::uint64_t x = 0; x < xcount; ++x) {
        const auto st = detail::batch_stats(vals[x], cfg.batches);
        rep.mean.push_back(st.mean);
        rep.stderr_.push_back(st.stderr_);
        if (std::abs(st.mean - target) > 3 * st.stderr_) rep.uniform_within_3sigma = false;
    }
    return rep;
}

/// One gamma point of the spoofing experiment.
struct SpoofPoint {
    double gamma = 0;
    double spoofer_sxes = 0, spoofer_stderr = 0;
    double noisy_sxes = 0, noisy_stderr = 0;          // conditional-on-top-0 p_exp
    double noisy_sxes_joint = 0, noisy_joint_stderr = 0;  // joint (0,x) p_exp
    double margin = 0, margin_stderr = 0;             // spoofer - noisy, paired
    bool spoofer_wins_3sigma = false;
};

struct SpoofExperimentReport {
    EnsembleConfig cfg;
    std::int64_t trajectories = 0;
    std::vector<SpoofPoint> points;
    std::optional<double> crossover_gamma;  // smallest gamma after which the spoofer always wins
    double threshold_reference = 0;  // 2^{-n} (E[sum p] + printed cross-term bound * 2^n)
};

/// Spoofer sXES (p_exp := raw q) vs depolarized-circuit sXES across a
/// gamma sweep, with common circuits per point for a paired margin.
inline SpoofExperimentReport sxes_spoof_experiment(const EnsembleConfig& cfg,
                                                   std::span<const double> gammas,
                                                   std::int64_t trajectories,
                                                   NoiseSpec::LayerSet layer_set = NoiseSpec::LayerSet::AllLayers) {
    validate(cfg);
    if (cfg.d != 1) throw std::invalid_argument("sxes_spoof_experiment: d = 1 only");
    if (gammas.empty()) throw std::invalid_argument("sxes_spoof_experiment: empty gamma list");
    if (trajectories < 1) throw std::invalid_argument("sxes_spoof_experiment: trajectories >= 1");
    SpoofExperimentReport rep;
    rep.cfg = cfg;
    rep.trajectories = trajectories;
    const std::uint64_t xcount = std::uint64_t{1} << cfg.n;

    double mean_sum_p = 0;
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        const double gamma = gammas[gi];
        if (gamma < 0 || gamma > 1) throw std::invalid_argument("gamma outside [0,1]");
        NoiseSpec noise{gamma, layer_set};
        auto vals = detail::ensemble_collect(
            cfg, 4, [&](std::int64_t c, const MqsvtCircuit& circ, std::span<double> slot) {
                const StateVector s = evolve(circ);
                std::vector<double> p(xcount);
                double sum_p = 0;
                for (std::uint64_t x = 0; x < xcount; ++x) {
                    p[x] = std::norm(s.amp[x]);
                    if (x) sum_p += p[x];
                }
                const double q = spoof_probability(circ, 1);
                double spoof = 0;
                for (std::uint64_t x = 1; x < xcount; ++x) spoof += p[x] * q;

                const std::uint64_t nseed = derive_seed(cfg.master_seed, {3, static_cast<std::uint64_t>(c), gi});
                const OutputDistribution nd =
                    (gamma == 0.0) ? full_distribution(circ)
                                   : noisy_distribution(circ, noise, trajectories, nseed, 1);
                const double mass = nd.top_zero_mass();
                double cond = 0, joint = 0;
                for (std::uint64_t x = 1; x < xcount; ++x) {
                    joint += p[x] * nd.p[x];
                    if (mass > 0) cond += p[x] * (nd.p[x] / mass);
                }
                slot[0] = spoof;
                slot[1] = cond;
                slot[2] = joint;
                slot[3] = sum_p;
            });
        const auto s_sp = detail::batch_stats(vals[0], cfg.batches);
        const auto s_cd = detail::batch_stats(vals[1], cfg.batches);
        std::vector<double> diff(vals[0].size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = vals[0][i] - vals[1][i];
        const auto s_df = detail::batch_stats(diff, cfg.batches);
        const auto s_jt = detail::batch_stats(vals[2], cfg.batches);
        double sp_mean = 0;
        for (double v : vals[3]) sp_mean += v;
        mean_sum_p = sp_mean / static_cast<double>(vals[3].size());

        SpoofPoint pt;
        pt.gamma = gamma;
        pt.spoofer_sxes = s_sp.mean;
        pt.spoofer_stderr = s_sp.stderr_;
        pt.noisy_sxes = s_cd.mean;
        pt.noisy_stderr = s_cd.stderr_;
        pt.noisy_sxes_joint = s_jt.mean;
        pt.noisy_joint_stderr = s_jt.stderr_;
        pt.margin = s_df.mean;
        pt.margin_stderr = s_df.stderr_;
        pt.spoofer_wins_3sigma = s_df.mean > 3 * s_df.stderr_;
        rep.points.push_back(pt);
    }
    // smallest gamma such that the spoofer wins at 3 sigma from there on
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        bool all = true;
        for (std::size_t j = i; j < rep.points.size(); ++j) all = all && rep.points[j].spoofer_wins_3sigma;
        if (all && rep.points[i].spoofer_wins_3sigma) {
            rep.crossover_gamma = rep.points[i].gamma;
            break;
        }
    }
    const double ct = cfg.n >= 2 ? to_double(analytic_cross_term_lb(cfg.n, cfg.d_u)) : 0.0;
    rep.threshold_reference = std::ldexp(mean_sum_p + std::ldexp(ct, cfg.n), -cfg.n);
    return rep;
}

}  // namespace mqsvt
