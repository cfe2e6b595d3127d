#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mqsvt/circuit.hpp"
#include "mqsvt/pauli.hpp"
#include "mqsvt/statevector.hpp"

namespace mqsvt {

/// Ordered Pauli strings of one mQSVT path: per block k the sub-path
/// s_1..s_{dU+1}, st_{dU+1}..st_1, stored in circuit-time order, so a
/// path holds 2*d*(dU+1) strings of n+1 letters.
struct PauliPath {
    int n_plus_1 = 0;
    int d_u = 0;
    int blocks = 0;
    std::vector<PauliString> strings;

    static PauliPath identity(int n_plus_1, int d_u, int blocks) {
        PauliPath p{n_plus_1, d_u, blocks, {}};
        p.strings.assign(static_cast<std::size_t>(2 * blocks * (d_u + 1)),
                         PauliString::identity(static_cast<std::size_t>(n_plus_1)));
        return p;
    }

    int strings_per_block() const { return 2 * (d_u + 1); }

    /// s_j of block k (1-based j in 1..dU+1).
    PauliString& s(int block, int j) { return strings[static_cast<std::size_t>(block * strings_per_block() + j - 1)]; }
    /// st_j of block k (1-based j in 1..dU+1).
    PauliString& st(int block, int j) {
        return strings[static_cast<std::size_t>(block * strings_per_block() + 2 * (d_u + 1) - j)];
    }
    const PauliString& s(int block, int j) const { return const_cast<PauliPath*>(this)->s(block, j); }
    const PauliString& st(int block, int j) const { return const_cast<PauliPath*>(this)->st(block, j); }

    bool shaped_for(const MqsvtCircuit& c) const {
        if (n_plus_1 != c.n_plus_1() || d_u != c.d_u() || blocks != c.blocks) return false;
        for (const auto& s : strings) {
            if (static_cast<int>(s.size()) != n_plus_1) return false;
        }
        return static_cast<int>(strings.size()) == 2 * blocks * (d_u + 1);
    }
};

namespace detail {

/// 16x16 table of two-qubit transition amplitudes through a fixed gate:
/// t[in][out] = Tr(V P_in V+ P_out) / 4 (normalized local Paulis).
struct GateTable {
    std::array<std::array<double, 16>, 16> t{};
};

inline GateTable make_gate_table(const Eigen::Matrix4cd& v) {
    GateTable g;
    std::array<Eigen::Matrix4cd, 16> paulis;
    for (int c = 0; c < 16; ++c) paulis[static_cast<std::size_t>(c)] = dense_matrix(pauli2(c));
    for (int in = 0; in < 16; ++in) {
        const Eigen::Matrix4cd m = v * paulis[static_cast<std::size_t>(in)] * v.adjoint();
        for (int out = 0; out < 16; ++out) {
            g.t[static_cast<std::size_t>(in)][static_cast<std::size_t>(out)] =
                (m * paulis[static_cast<std::size_t>(out)]).trace().real() / 4.0;
        }
    }
    return g;
}

/// 4x4 register-0 transition table through R(phi): r0[in][out] =
/// Tr(L_out R L_in R+) / 2.
inline std::array<std::array<double, 4>, 4> phase_table(double phi) {
    std::array<std::array<double, 4>, 4> r0{};
    const Eigen::Matrix2cd r = rz_gate(phi);
    for (int in = 0; in < 4; ++in) {
        const Eigen::Matrix2cd m = r * letter_matrix(static_cast<PauliLetter>(in)) * r.adjoint();
        for (int out = 0; out < 4; ++out) {
            r0[static_cast<std::size_t>(in)][static_cast<std::size_t>(out)] =
                (m * letter_matrix(static_cast<PauliLetter>(out))).trace().real() / 2.0;
        }
    }
    return r0;
}

inline int local_code(const PauliString& s, int a, int b) {
    return pauli2_code(s.get(static_cast<std::size_t>(a)), s.get(static_cast<std::size_t>(b)));
}

}  // namespace detail

/// Per-circuit cache of all gate transition tables plus the phase-gate
/// tables. Immutable once built; safe to share across threads.
class TransitionCache {
  public:
    explicit TransitionCache(const MqsvtCircuit& c) : circ_(&c) {
        tables_.resize(c.u.gates.size());
        for (std::size_t j = 0; j < c.u.gates.size(); ++j) {
            tables_[j].reserve(c.u.gates[j].size());
            for (const auto& v : c.u.gates[j]) tables_[j].push_back(detail::make_gate_table(v));
        }
        phase_tables_.reserve(c.phases.size());
        for (double phi : c.phases) phase_tables_.push_back(detail::phase_table(phi));
    }

    const MqsvtCircuit& circuit() const { return *circ_; }
    const detail::GateTable& gate(int layer, int idx) const {
        return tables_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(idx)];
    }
    const std::array<std::array<double, 4>, 4>& phase(int idx) const {
        return phase_tables_[static_cast<std::size_t>(idx)];
    }

  private:
    const MqsvtCircuit* circ_;
    std::vector<std::vector<detail::GateTable>> tables_;
    std::vector<std::array<std::array<double, 4>, 4>> phase_tables_;
};

/// Transition amplitude of one circuit layer between full strings:
/// product of per-gate local factors for unitary layers, and for phase
/// layers the register-0 factor times Kronecker deltas elsewhere.
inline double layer_transition(const TransitionCache& cache, const CircuitLayer& layer,
                               const PauliString& s_in, const PauliString& s_out) {
    const MqsvtCircuit& c = cache.circuit();
    if (static_cast<int>(s_in.size()) != c.n_plus_1() || static_cast<int>(s_out.size()) != c.n_plus_1()) {
        throw std::invalid_argument("layer_transition: string size mismatch");
    }
    double f = 1.0;
    switch (layer.kind) {
        case CircuitLayer::Kind::Phase: {
            for (int r = 1; r < c.n_plus_1(); ++r) {
                if (s_in.get(static_cast<std::size_t>(r)) != s_out.get(static_cast<std::size_t>(r))) return 0.0;
            }
            const auto& r0 = cache.phase(layer.index);
            return r0[static_cast<int>(s_in.get(0))][static_cast<int>(s_out.get(0))];
        }
        case CircuitLayer::Kind::Unitary: {
            const auto& pairs = c.u.arch.layers[static_cast<std::size_t>(layer.index)];
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const auto [a, b] = pairs[i];
                f *= cache.gate(layer.index, static_cast<int>(i))
                         .t[detail::local_code(s_in, a, b)][detail::local_code(s_out, a, b)];
                if (f == 0.0) return 0.0;
            }
            return f;
        }
        case CircuitLayer::Kind::UnitaryAdjoint: {
            // <<out|V+|in>> = Tr(V out V+ in)/4: same table, slots swapped
            const auto& pairs = c.u.arch.layers[static_cast<std::size_t>(layer.index)];
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const auto [a, b] = pairs[i];
                f *= cache.gate(layer.index, static_cast<int>(i))
                         .t[detail::local_code(s_out, a, b)][detail::local_code(s_in, a, b)];
                if (f == 0.0) return 0.0;
            }
            return f;
        }
    }
    return f;
}

/// The spoofing path: first string Z on register 0 and Z on register
/// 0's layer-1 partner; every later string Z on register 0 only.
inline PauliPath canonical_path_r(const Architecture& arch, int blocks) {
    PauliPath p = PauliPath::identity(arch.n_plus_1, arch.depth(), blocks);
    for (auto& s : p.strings) s.set(0, PauliLetter::Z);
    p.strings.front().set(static_cast<std::size_t>(arch.partner(0, 0)), PauliLetter::Z);
    return p;
}

namespace detail {
/// Register-indexed bits of the measured basis state |0 x>: register 0
/// is 0, registers 1..n carry x (most significant x-bit on register 1).
inline std::uint64_t measurement_bits(std::uint64_t x, int n) {
    std::uint64_t bits = 0;
    for (int r = 1; r <= n; ++r) {
        if ((x >> (n - r)) & 1) bits |= std::uint64_t{1} << r;
    }
    return bits;
}
}  // namespace detail

/// F(U, s, x): product of the two endpoint overlaps and every layer
/// transition, with the first and last rotation absorbed into
/// preparation and measurement.
inline double fourier_coefficient(const TransitionCache& cache, const PauliPath& path, std::uint64_t x) {
    const MqsvtCircuit& c = cache.circuit();
    if (!path.shaped_for(c)) throw std::invalid_argument("fourier_coefficient: path shape mismatch");
    const int n = c.n();
    double f = basis_state_overlap(path.s(0, 1), std::uint64_t{0});
    if (f == 0.0) return 0.0;
    using K = CircuitLayer::Kind;
    for (int k = 0; k < c.blocks && f != 0.0; ++k) {
        if (k > 0) {
            f *= layer_transition(cache, {K::Phase, 2 * k}, path.st(k - 1, 1), path.s(k, 1));
            if (f == 0.0) return 0.0;
        }
        for (int j = 1; j <= c.d_u(); ++j) {
            f *= layer_transition(cache, {K::Unitary, j - 1}, path.s(k, j), path.s(k, j + 1));
            if (f == 0.0) return 0.0;
        }
        f *= layer_transition(cache, {K::Phase, 2 * k + 1}, path.s(k, c.d_u() + 1), path.st(k, c.d_u() + 1));
        if (f == 0.0) return 0.0;
        for (int j = c.d_u(); j >= 1; --j) {
            f *= layer_transition(cache, {K::UnitaryAdjoint, j - 1}, path.st(k, j + 1), path.st(k, j));
            if (f == 0.0) return 0.0;
        }
    }
    f *= basis_state_overlap(path.st(c.blocks - 1, 1), detail::measurement_bits(x, n));
    return f;
}

/// F(U, r, x) along the canonical path, touching only the O(d * dU)
/// gates on register 0; polynomial in n. The value does not depend on
/// x (the measurement-end string is Z on register 0 only).
inline double canonical_fourier_coefficient(const MqsvtCircuit& c) {
    const int n = c.n();
    const int zi = pauli2_code("ZI");
    const int zz = pauli2_code("ZZ");
    double f = std::pow(0.5, n + 1);  // the two endpoint overlaps
    for (int k = 0; k < c.blocks; ++k) {
        for (int j = 0; j < c.d_u(); ++j) {
            const int gi = c.u.arch.gate_index(j, 0);
            const auto [a, b] = c.u.arch.layers[static_cast<std::size_t>(j)][static_cast<std::size_t>(gi)];
            Eigen::Matrix4cd v = c.u.gates[static_cast<std::size_t>(j)][static_cast<std::size_t>(gi)];
            if (b == 0) {
                // reorder so register 0 is the first tensor factor
                Eigen::Matrix4cd w;
                const int swapmap[4] = {0, 2, 1, 3};
                for (int r = 0; r < 4; ++r) {
                    for (int cc = 0; cc < 4; ++cc) w(r, cc) = v(swapmap[r], swapmap[cc]);
                }
                v = w;
            }
            const int in_code = (k == 0 && j == 0) ? zz : zi;
            const Eigen::Matrix4cd pin = dense_matrix(pauli2(in_code));
            const Eigen::Matrix4cd pzi = dense_matrix(pauli2(zi));
            const double t_u = (v * pin * v.adjoint() * pzi).trace().real() / 4.0;
            const double t_ud = (v * pzi * v.adjoint() * pzi).trace().real() / 4.0;
            f *= t_u * t_ud;
            if (f == 0.0) return 0.0;
        }
        // phase-gate factors are 1: R(phi) and Z commute
    }
    return f;
}

/// q(U, x) = 2^{-n} + F(U, r, x).
inline double spoof_probability(const MqsvtCircuit& c, std::uint64_t /*x*/) {
    return std::pow(0.5, c.n()) + canonical_fourier_coefficient(c);
}

struct SpoofDistribution {
    int n = 0;
    std::vector<double> raw;      // raw signed q(U,x), x = 1..2^n-1 (index x-1)
    std::vector<double> clipped;  // clipped to >= 0 and renormalized over x != 0

    double raw_sum() const {
        double t = 0;
        for (double v : raw) t += v;
        return t;
    }
};

/// Raw q values for scoring plus a sampling-safe clipped copy.
inline SpoofDistribution spoof_distribution(const MqsvtCircuit& c) {
    SpoofDistribution d;
    d.n = c.n();
    const double q = spoof_probability(c, 1);
    d.raw.assign((std::uint64_t{1} << d.n) - 1, q);
    d.clipped = d.raw;
    double mass = 0;
    for (double& v : d.clipped) {
        if (v < 0) v = 0;
        mass += v;
    }
    if (mass > 0) {
        for (double& v : d.clipped) v /= mass;
    } else {
        const double u = 1.0 / static_cast<double>(d.clipped.size());
        for (double& v : d.clipped) v = u;
    }
    return d;
}

/// Exact sum of F over every Pauli path; tiny instances only.
inline double enumerate_path_sum(const MqsvtCircuit& c, std::uint64_t x) {
    const int n_strings = 2 * c.blocks * (c.d_u() + 1);
    const double log2_space = 2.0 * c.n_plus_1() * n_strings;
    if (log2_space > 24.0) {
        throw std::invalid_argument("enumerate_path_sum: path space exceeds 2^24 (need n+1=2, d=1, d_U<=2)");
    }
    const TransitionCache cache(c);
    const int letters = c.n_plus_1();
    const std::uint64_t per_string = std::uint64_t{1} << (2 * letters);

    // circuit-time layer between consecutive strings
    std::vector<CircuitLayer> between;
    using K = CircuitLayer::Kind;
    for (int k = 0; k < c.blocks; ++k) {
        if (k > 0) between.push_back({K::Phase, 2 * k});
        for (int j = 0; j < c.d_u(); ++j) between.push_back({K::Unitary, j});
        between.push_back({K::Phase, 2 * k + 1});
        for (int j = c.d_u() - 1; j >= 0; --j) between.push_back({K::UnitaryAdjoint, j});
    }

    std::vector<PauliString> cur(static_cast<std::size_t>(n_strings),
                                 PauliString::identity(static_cast<std::size_t>(letters)));
    auto decode = [&](std::uint64_t code) {
        PauliString s(static_cast<std::size_t>(letters));
        for (int i = 0; i < letters; ++i) s.set(static_cast<std::size_t>(i), static_cast<PauliLetter>((code >> (2 * i)) & 3));
        return s;
    };
    const std::uint64_t mbits = detail::measurement_bits(x, c.n());

    double total = 0.0;
    // depth-first over strings with early pruning on zero partial products
    std::vector<std::uint64_t> idx(static_cast<std::size_t>(n_strings), 0);
    std::vector<double> partial(static_cast<std::size_t>(n_strings) + 1, 1.0);
    int level = 0;
    idx[0] = 0;
    while (level >= 0) {
        if (idx[static_cast<std::size_t>(level)] >= per_string) {
            --level;
            if (level >= 0) ++idx[static_cast<std::size_t>(level)];
            continue;
        }
        cur[static_cast<std::size_t>(level)] = decode(idx[static_cast<std::size_t>(level)]);
        double f = partial[static_cast<std::size_t>(level)];
        if (level == 0) {
            f *= basis_state_overlap(cur[0], std::uint64_t{0});
        } else {
            f *= layer_transition(cache, between[static_cast<std::size_t>(level - 1)],
                                  cur[static_cast<std::size_t>(level - 1)], cur[static_cast<std::size_t>(level)]);
        }
        if (f == 0.0) {
            ++idx[static_cast<std::size_t>(level)];
            continue;
        }
        if (level == n_strings - 1) {
            total += f * basis_state_overlap(cur[static_cast<std::size_t>(level)], mbits);
            ++idx[static_cast<std::size_t>(level)];
            continue;
        }
        partial[static_cast<std::size_t>(level) + 1] = f;
        ++level;
        idx[static_cast<std::size_t>(level)] = 0;
    }
    return total;
}

}  // namespace mqsvt
