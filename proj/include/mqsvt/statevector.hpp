#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mqsvt/circuit.hpp"
#include "mqsvt/parallel.hpp"
#include "mqsvt/pauli.hpp"
#include "mqsvt/rng.hpp"

namespace mqsvt {

inline constexpr int kMaxRegisters = 12;

/// Amplitudes over n+1 registers; register 0 is the most significant
/// bit of the basis index, so |0x> lives at index x.
struct StateVector {
    int n_plus_1 = 0;
    std::vector<std::complex<double>> amp;

    static StateVector zero_state(int n_plus_1) {
        if (n_plus_1 > kMaxRegisters) throw std::invalid_argument("register count above cap");
        StateVector s;
        s.n_plus_1 = n_plus_1;
        s.amp.assign(std::size_t{1} << n_plus_1, {0, 0});
        s.amp[0] = {1, 0};
        return s;
    }

    double norm2() const {
        double t = 0;
        for (const auto& a : amp) t += std::norm(a);
        return t;
    }
};

namespace detail {

inline void apply_two_qubit(StateVector& s, const Eigen::Matrix4cd& g, int q1, int q2) {
    const int nq = s.n_plus_1;
    const std::uint64_t b1 = std::uint64_t{1} << (nq - 1 - q1);
    const std::uint64_t b2 = std::uint64_t{1} << (nq - 1 - q2);
    const std::uint64_t dim = std::uint64_t{1} << nq;
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & (b1 | b2)) continue;
        const std::uint64_t i00 = base, i01 = base | b2, i10 = base | b1, i11 = base | b1 | b2;
        const std::complex<double> a00 = s.amp[i00], a01 = s.amp[i01], a10 = s.amp[i10], a11 = s.amp[i11];
        s.amp[i00] = g(0, 0) * a00 + g(0, 1) * a01 + g(0, 2) * a10 + g(0, 3) * a11;
        s.amp[i01] = g(1, 0) * a00 + g(1, 1) * a01 + g(1, 2) * a10 + g(1, 3) * a11;
        s.amp[i10] = g(2, 0) * a00 + g(2, 1) * a01 + g(2, 2) * a10 + g(2, 3) * a11;
        s.amp[i11] = g(3, 0) * a00 + g(3, 1) * a01 + g(3, 2) * a10 + g(3, 3) * a11;
    }
}

inline void apply_one_qubit(StateVector& s, const Eigen::Matrix2cd& g, int q) {
    const int nq = s.n_plus_1;
    const std::uint64_t b = std::uint64_t{1} << (nq - 1 - q);
    const std::uint64_t dim = std::uint64_t{1} << nq;
    for (std::uint64_t base = 0; base < dim; ++base) {
        if (base & b) continue;
        const std::complex<double> a0 = s.amp[base], a1 = s.amp[base | b];
        s.amp[base] = g(0, 0) * a0 + g(0, 1) * a1;
        s.amp[base | b] = g(1, 0) * a0 + g(1, 1) * a1;
    }
}

inline Eigen::Matrix2cd rz_gate(double phi) {
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    r(0, 0) = std::exp(std::complex<double>(0, phi));
    r(1, 1) = std::exp(std::complex<double>(0, -phi));
    return r;
}

/// With probability gamma, a uniformly random X/Y/Z on each register.
/// Consumes a fixed number of draws per register so that runs with the
/// same seed stay coupled across different gamma values.
inline void apply_noise_layer(StateVector& s, double gamma, Prng& rng) {
    for (int r = 0; r < s.n_plus_1; ++r) {
        const double u = rng.next_double();
        const int which = static_cast<int>(rng.next_below(3));  // X, Y, Z
        if (u < gamma) {
            apply_one_qubit(s, letter_matrix(static_cast<PauliLetter>(which + 1)), r);
        }
    }
}

}  // namespace detail

/// Statevector evolution of the full layer sequence from |0^{n+1}>.
/// When `noise` is given, each register suffers stochastic Pauli
/// insertion after every layer in the configured layer set.
inline StateVector evolve(const MqsvtCircuit& c, const NoiseSpec* noise = nullptr,
                          Prng* noise_rng = nullptr) {
    StateVector s = StateVector::zero_state(c.n_plus_1());
    const auto seq = layer_sequence(c);
    for (const auto& layer : seq) {
        switch (layer.kind) {
            case CircuitLayer::Kind::Phase:
                detail::apply_one_qubit(s, detail::rz_gate(c.phases[static_cast<std::size_t>(layer.index)]), 0);
                break;
            case CircuitLayer::Kind::Unitary:
                for (std::size_t i = 0; i < c.u.arch.layers[static_cast<std::size_t>(layer.index)].size(); ++i) {
                    const auto [a, b] = c.u.arch.layers[static_cast<std::size_t>(layer.index)][i];
                    detail::apply_two_qubit(s, c.u.gates[static_cast<std::size_t>(layer.index)][i], a, b);
                }
                break;
            case CircuitLayer::Kind::UnitaryAdjoint:
                for (std::size_t i = 0; i < c.u.arch.layers[static_cast<std::size_t>(layer.index)].size(); ++i) {
                    const auto [a, b] = c.u.arch.layers[static_cast<std::size_t>(layer.index)][i];
                    detail::apply_two_qubit(s, c.u.gates[static_cast<std::size_t>(layer.index)][i].adjoint(), a, b);
                }
                break;
        }
        if (noise && noise->gamma > 0 && noise_rng) {
            const bool unitary_layer = layer.kind != CircuitLayer::Kind::Phase;
            if (noise->layer_set == NoiseSpec::LayerSet::AllLayers || unitary_layer) {
                detail::apply_noise_layer(s, noise->gamma, *noise_rng);
            }
        }
    }
    return s;
}

/// Joint probabilities keyed by (top_bit, x); p[(top<<n) | x].
struct OutputDistribution {
    int n = 0;
    std::vector<double> p;

    double joint(int top_bit, std::uint64_t x) const {
        return p[(static_cast<std::uint64_t>(top_bit) << n) | x];
    }
    double total() const {
        double t = 0;
        for (double v : p) t += v;
        return t;
    }
    /// Postselection success probability: mass of the top_bit = 0 block.
    double top_zero_mass() const {
        double t = 0;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) t += p[x];
        return t;
    }
};

/// p(U,x) = |<0x| mQSVT(U) |0^{n+1}>|^2, unnormalized joint probability.
inline double output_probability(const MqsvtCircuit& c, std::uint64_t x) {
    if (x >= (std::uint64_t{1} << c.n())) throw std::invalid_argument("x out of range");
    const StateVector s = evolve(c);
    return std::norm(s.amp[x]);
}

inline OutputDistribution distribution_from_state(const StateVector& s) {
    OutputDistribution d;
    d.n = s.n_plus_1 - 1;
    d.p.resize(s.amp.size());
    for (std::size_t i = 0; i < s.amp.size(); ++i) d.p[i] = std::norm(s.amp[i]);
    return d;
}

inline OutputDistribution full_distribution(const MqsvtCircuit& c) {
    return distribution_from_state(evolve(c));
}

/// Monte-Carlo average over stochastic Pauli-insertion trajectories;
/// unbiased for the depolarizing channel, deterministic per seed, and
/// bit-exact equal to full_distribution at gamma = 0.
inline OutputDistribution noisy_distribution(const MqsvtCircuit& c, const NoiseSpec& noise,
                                             std::int64_t trajectories, std::uint64_t seed,
                                             int workers = 1) {
    if (trajectories < 1) throw std::invalid_argument("trajectories must be >= 1");
    if (noise.gamma == 0.0) return full_distribution(c);
    using Vec = std::vector<double>;
    const std::size_t dim = std::size_t{1} << c.n_plus_1();
    const Vec total = parallel_map_reduce<Vec>(
        trajectories, workers,
        [&](std::int64_t t) {
            Prng rng(derive_seed(seed, {0xC0u, static_cast<std::uint64_t>(t)}));
            const StateVector s = evolve(c, &noise, &rng);
            Vec v(dim);
            for (std::size_t i = 0; i < dim; ++i) v[i] = std::norm(s.amp[i]);
            return v;
        },
        [dim](const Vec& a, const Vec& b) {
            Vec out(dim);
            for (std::size_t i = 0; i < dim; ++i) out[i] = a[i] + b[i];
            return out;
        });
    OutputDistribution d;
    d.n = c.n();
    d.p.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) d.p[i] = total[i] / static_cast<double>(trajectories);
    return d;
}

/// k i.i.d. samples of the bottom-n bitstring, optionally conditioned
/// on the top register measuring 0.
inline std::vector<std::uint64_t> sample_outputs(const OutputDistribution& dist, std::int64_t k,
                                                 std::uint64_t seed, bool postselect_top_zero) {
    std::vector<double> cdf;
    std::vector<std::uint64_t> keys;
    const std::uint64_t xcount = std::uint64_t{1} << dist.n;
    double mass = 0;
    for (std::uint64_t i = 0; i < dist.p.size(); ++i) {
        if (postselect_top_zero && i >= xcount) break;
        mass += dist.p[i];
        cdf.push_back(mass);
        keys.push_back(i & (xcount - 1));
    }
    if (mass <= 0) throw std::domain_error("sample_outputs: zero postselection mass");
    Prng rng(seed);
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        const double u = rng.next_double() * mass;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        out.push_back(keys[idx]);
    }
    return out;
}

inline std::string bitstring_of(std::uint64_t x, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int j = 0; j < n; ++j) {
        if ((x >> (n - 1 - j)) & 1) s[static_cast<std::size_t>(j)] = '1';
    }
    return s;
}

/// CSV export: header then one (top_bit, bitstring, probability) row per entry.
inline std::string distribution_csv(const OutputDistribution& d) {
    std::ostringstream os;
    os << "top_bit,x,probability\n";
    os.precision(17);
    for (std::size_t i = 0; i < d.p.size(); ++i) {
        const int top = static_cast<int>(i >> d.n);
        os << top << "," << bitstring_of(i & ((std::uint64_t{1} << d.n) - 1), d.n) << "," << d.p[i] << "\n";
    }
    return os.str();
}

inline nlohmann::ordered_json distribution_json(const OutputDistribution& d) {
    nlohmann::ordered_json j;
    j["n"] = d.n;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < d.p.size(); ++i) {
        const int top = static_cast<int>(i >> d.n);
        entries.push_back({{"top_bit", top},
                           {"x", bitstring_of(i & ((std::uint64_t{1} << d.n) - 1), d.n)},
                           {"probability", d.p[i]}});
    }
    j["entries"] = std::move(entries);
    return j;
}

}  // namespace mqsvt
