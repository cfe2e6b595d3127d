#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mqsvt/rng.hpp"

namespace mqsvt {

/// Per-layer perfect matchings on registers 0..n (n+1 even). No
/// geometric locality: any pairing is allowed.
struct Architecture {
    int n_plus_1 = 0;
    std::vector<std::vector<std::pair<int, int>>> layers;  // layers[j] = pairs (lo, hi)

    int depth() const { return static_cast<int>(layers.size()); }

    bool valid() const {
        if (n_plus_1 < 2 || n_plus_1 % 2 != 0 || layers.empty()) return false;
        for (const auto& layer : layers) {
            std::vector<bool> used(static_cast<std::size_t>(n_plus_1), false);
            if (static_cast<int>(layer.size()) != n_plus_1 / 2) return false;
            for (auto [a, b] : layer) {
                if (a < 0 || b < 0 || a >= n_plus_1 || b >= n_plus_1 || a == b) return false;
                if (used[a] || used[b]) return false;
                used[a] = used[b] = true;
            }
        }
        return true;
    }

    /// Partner of register r in layer j.
    int partner(int layer, int r) const {
        for (auto [a, b] : layers[layer]) {
            if (a == r) return b;
            if (b == r) return a;
        }
        throw std::logic_error("register not matched");
    }

    /// Index of the gate acting on register r in layer j.
    int gate_index(int layer, int r) const {
        for (std::size_t i = 0; i < layers[layer].size(); ++i) {
            if (layers[layer][i].first == r || layers[layer][i].second == r) return static_cast<int>(i);
        }
        throw std::logic_error("register not matched");
    }
};

/// Uniformly random perfect matching per layer: shuffle, pair adjacent.
inline Architecture random_architecture(int n_plus_1, int d_u, std::uint64_t seed) {
    if (n_plus_1 < 2 || n_plus_1 % 2 != 0) throw std::invalid_argument("register count must be even and >= 2");
    if (d_u < 1) throw std::invalid_argument("d_U must be >= 1");
    Architecture arch;
    arch.n_plus_1 = n_plus_1;
    arch.layers.resize(static_cast<std::size_t>(d_u));
    for (int j = 0; j < d_u; ++j) {
        Prng rng(derive_seed(seed, {0xA0u, static_cast<std::uint64_t>(j)}));
        std::vector<int> order(static_cast<std::size_t>(n_plus_1));
        std::iota(order.begin(), order.end(), 0);
        for (int i = n_plus_1 - 1; i > 0; --i) {
            const int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[k]);
        }
        auto& layer = arch.layers[static_cast<std::size_t>(j)];
        for (int i = 0; i < n_plus_1; i += 2) {
            layer.emplace_back(std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1]));
        }
        std::sort(layer.begin(), layer.end());
    }
    return arch;
}

/// d_U layers of Haar-random two-qubit gates on an architecture.
struct LayeredUnitary {
    Architecture arch;
    std::vector<std::vector<Eigen::Matrix4cd>> gates;  // gates[layer][gate]

    int depth() const { return arch.depth(); }
};

/// Independent Haar gates, one stream per (layer, gate) so unused gates
/// can be skipped without disturbing the rest.
inline LayeredUnitary sample_layered_unitary(const Architecture& arch, std::uint64_t seed) {
    if (!arch.valid()) throw std::invalid_argument("invalid architecture");
    LayeredUnitary u;
    u.arch = arch;
    u.gates.resize(arch.layers.size());
    for (std::size_t j = 0; j < arch.layers.size(); ++j) {
        u.gates[j].resize(arch.layers[j].size());
        for (std::size_t i = 0; i < arch.layers[j].size(); ++i) {
            Prng rng(derive_seed(seed, {0xB0u, j, i}));
            u.gates[j][i] = haar_unitary4(rng);
        }
    }
    return u;
}

/// d blocks of (U, U+) interleaved with Z-rotations R(phi) = e^{i phi Z}
/// on register 0: R(phi1), U, R(phi2), U+, R(phi3), U, ...
struct MqsvtCircuit {
    LayeredUnitary u;
    int blocks = 1;
    std::vector<double> phases;  // length 2*blocks + 1

    int n_plus_1() const { return u.arch.n_plus_1; }
    int n() const { return u.arch.n_plus_1 - 1; }
    int d_u() const { return u.depth(); }
    /// d(2 d_U + 2) + 1, counting phase layers.
    int total_depth() const { return blocks * (2 * d_u() + 2) + 1; }
};

inline MqsvtCircuit build_mqsvt(LayeredUnitary u, int blocks, std::vector<double> phases) {
    if (blocks < 1) throw std::invalid_argument("blocks must be >= 1");
    if (static_cast<int>(phases.size()) != 2 * blocks + 1) {
        throw std::invalid_argument("need 2d+1 phases");
    }
    return MqsvtCircuit{std::move(u), blocks, std::move(phases)};
}

inline constexpr double kDefaultPhase = 0.78539816339744830961;  // pi/4

inline std::vector<double> default_phases(int blocks) {
    return std::vector<double>(static_cast<std::size_t>(2 * blocks + 1), kDefaultPhase);
}

/// Depolarizing spec: with probability gamma a register suffers a
/// uniformly random X/Y/Z after a layer. Application lives in the
/// simulator; this is pure data.
struct NoiseSpec {
    double gamma = 0.0;
    enum class LayerSet { AllLayers, UnitaryOnly } layer_set = LayerSet::AllLayers;
};

/// One step of the mQSVT layer sequence.
struct CircuitLayer {
    enum class Kind { Phase, Unitary, UnitaryAdjoint } kind;
    int index = 0;  // phase index into phases[], or unitary layer index
};

inline std::vector<CircuitLayer> layer_sequence(const MqsvtCircuit& c) {
    std::vector<CircuitLayer> seq;
    using K = CircuitLayer::Kind;
    for (int k = 0; k < c.blocks; ++k) {
        seq.push_back({K::Phase, 2 * k});
        for (int j = 0; j < c.d_u(); ++j) seq.push_back({K::Unitary, j});
        seq.push_back({K::Phase, 2 * k + 1});
        for (int j = c.d_u() - 1; j >= 0; --j) seq.push_back({K::UnitaryAdjoint, j});
    }
    seq.push_back({K::Phase, 2 * c.blocks});
    return seq;
}

// --- JSON serialization (reproducibility / cross-implementation diffs) ---

inline nlohmann::ordered_json to_json(const Architecture& a) {
    nlohmann::ordered_json j;
    j["n_plus_1"] = a.n_plus_1;
    j["layers"] = nlohmann::ordered_json::array();
    for (const auto& layer : a.layers) {
        nlohmann::ordered_json jl = nlohmann::ordered_json::array();
        for (auto [x, y] : layer) jl.push_back({x, y});
        j["layers"].push_back(jl);
    }
    return j;
}

inline Architecture architecture_from_json(const nlohmann::json& j) {
    Architecture a;
    a.n_plus_1 = j.at("n_plus_1").get<int>();
    for (const auto& jl : j.at("layers")) {
        std::vector<std::pair<int, int>> layer;
        for (const auto& p : jl) layer.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        a.layers.push_back(std::move(layer));
    }
    if (!a.valid()) throw std::invalid_argument("invalid architecture in JSON");
    return a;
}

inline nlohmann::ordered_json to_json(const MqsvtCircuit& c) {
    nlohmann::ordered_json j;
    j["architecture"] = to_json(c.u.arch);
    j["blocks"] = c.blocks;
    j["phases"] = c.phases;
    j["gates"] = nlohmann::ordered_json::array();
    for (const auto& layer : c.u.gates) {
        nlohmann::ordered_json jl = nlohmann::ordered_json::array();
        for (const auto& g : layer) {
            nlohmann::ordered_json jg = nlohmann::ordered_json::array();  // row-major re/im pairs
            for (int r = 0; r < 4; ++r) {
                for (int col = 0; col < 4; ++col) {
                    jg.push_back(g(r, col).real());
                    jg.push_back(g(r, col).imag());
                }
            }
            jl.push_back(jg);
        }
        j["gates"].push_back(jl);
    }
    return j;
}

inline MqsvtCircuit circuit_from_json(const nlohmann::json& j) {
    LayeredUnitary u;
    u.arch = architecture_from_json(j.at("architecture"));
    for (const auto& jl : j.at("gates")) {
        std::vector<Eigen::Matrix4cd> layer;
        for (const auto& jg : jl) {
            Eigen::Matrix4cd g;
            int k = 0;
            for (int r = 0; r < 4; ++r) {
                for (int col = 0; col < 4; ++col) {
                    const double re = jg.at(k).get<double>();
                    const double im = jg.at(k + 1).get<double>();
                    g(r, col) = std::complex<double>(re, im);
                    k += 2;
                }
            }
            layer.push_back(g);
        }
        u.gates.push_back(std::move(layer));
    }
    return build_mqsvt(std::move(u), j.at("blocks").get<int>(), j.at("phases").get<std::vector<double>>());
}

/// Convenience: sample a full random circuit for ensemble index `c`.
/// Seed streams: architecture from (master, 0xA?, c), gates from
/// (master, 0xB?, c, layer, gate).
inline MqsvtCircuit sample_circuit(int n_plus_1, int d_u, int blocks, std::uint64_t master_seed,
                                   std::uint64_t circuit_index,
                                   const std::vector<double>* phases = nullptr) {
    const std::uint64_t arch_seed = derive_seed(master_seed, {1, circuit_index});
    const std::uint64_t gate_seed = derive_seed(master_seed, {2, circuit_index});
    Architecture arch = random_architecture(n_plus_1, d_u, arch_seed);
    LayeredUnitary u = sample_layered_unitary(arch, gate_seed);
    return build_mqsvt(std::move(u), blocks, phases ? *phases : default_phases(blocks));
}

}  // namespace mqsvt
