#pragma once

#include <Eigen/Dense>
#include <cassert>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mqsvt {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char letter_char(PauliLetter l) { return "IXYZ"[static_cast<int>(l)]; }

inline PauliLetter letter_from_char(char c) {
    switch (c) {
        case 'I': return PauliLetter::I;
        case 'X': return PauliLetter::X;
        case 'Y': return PauliLetter::Y;
        case 'Z': return PauliLetter::Z;
        default: throw std::invalid_argument("bad Pauli letter: " + std::string(1, c));
    }
}

/// Power of i in {1, i, -1, -i}, stored as the exponent mod 4.
struct Phase {
    int exp = 0;  // value is i^exp

    Phase operator*(Phase o) const { return Phase{(exp + o.exp) & 3}; }
    std::complex<double> value() const {
        static const std::complex<double> tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return tab[exp & 3];
    }
    bool operator==(const Phase&) const = default;
};

/// Word of Pauli letters over k registers, stored as x/z bit masks
/// (I=00, X=10, Y=11, Z=01 as (x,z) pairs). The stored word is always
/// the bare tensor of letters; the normalized operator (1/sqrt2)^k *
/// word is applied by the operations that need it.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t k) : n_(k) { assert(k <= 64); }

    static PauliString identity(std::size_t k) { return PauliString(k); }

    static PauliString from_letters(const std::vector<PauliLetter>& ls) {
        PauliString p(ls.size());
        for (std::size_t i = 0; i < ls.size(); ++i) p.set(i, ls[i]);
        return p;
    }

    static PauliString parse(const std::string& s) {
        PauliString p(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) p.set(i, letter_from_char(s[i]));
        return p;
    }

    std::size_t size() const { return n_; }

    PauliLetter get(std::size_t i) const {
        const int x = static_cast<int>((x_ >> i) & 1);
        const int z = static_cast<int>((z_ >> i) & 1);
        return static_cast<PauliLetter>(x ? (z ? 2 : 1) : (z ? 3 : 0));
    }

    void set(std::size_t i, PauliLetter l) {
        const std::uint64_t bit = 1ULL << i;
        x_ &= ~bit;
        z_ &= ~bit;
        if (l == PauliLetter::X || l == PauliLetter::Y) x_ |= bit;
        if (l == PauliLetter::Z || l == PauliLetter::Y) z_ |= bit;
    }

    bool is_identity() const { return x_ == 0 && z_ == 0; }
    std::uint64_t x_mask() const { return x_; }
    std::uint64_t z_mask() const { return z_; }

    std::string str() const {
        std::string s(n_, 'I');
        for (std::size_t i = 0; i < n_; ++i) s[i] = letter_char(get(i));
        return s;
    }

    bool operator==(const PauliString&) const = default;

  private:
    std::uint64_t x_ = 0, z_ = 0;
    std::size_t n_ = 0;
};

/// tensor(p) * tensor(q) = phase * tensor(r) on bare (unnormalized) words.
inline std::pair<Phase, PauliString> multiply(const PauliString& p, const PauliString& q) {
    if (p.size() != q.size()) throw std::invalid_argument("pauli length mismatch");
    PauliString r(p.size());
    int e = 0;
    // per-register phase table: i^exp for L1*L2, indexed [L1][L2]
    static const int phase_tab[4][4] = {
        {0, 0, 0, 0},   // I *
        {0, 0, 1, 3},   // X * {I,X,Y,Z}: XY=iZ, XZ=-iY
        {0, 3, 0, 1},   // Y * : YX=-iZ, YZ=iX
        {0, 1, 3, 0},   // Z * : ZX=iY, ZY=-iX
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int a = static_cast<int>(p.get(i));
        const int b = static_cast<int>(q.get(i));
        e += phase_tab[a][b];
    }
    PauliString out(p.size());
    // letter product is XOR on the (x,z) masks
    const std::uint64_t x = p.x_mask() ^ q.x_mask();
    const std::uint64_t z = p.z_mask() ^ q.z_mask();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const int xb = static_cast<int>((x >> i) & 1);
        const int zb = static_cast<int>((z >> i) & 1);
        out.set(i, static_cast<PauliLetter>(xb ? (zb ? 2 : 1) : (zb ? 3 : 0)));
    }
    return {Phase{e & 3}, out};
}

inline const Eigen::Matrix2cd& letter_matrix(PauliLetter l) {
    static const Eigen::Matrix2cd mats[4] = {
        Eigen::Matrix2cd::Identity(),
        (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
        (Eigen::Matrix2cd() << std::complex<double>(0, 0), std::complex<double>(0, -1),
         std::complex<double>(0, 1), std::complex<double>(0, 0))
            .finished(),
        (Eigen::Matrix2cd() << 1, 0, 0, -1).finished(),
    };
    return mats[static_cast<int>(l)];
}

/// Exact 2^k x 2^k matrix; normalized form scaled by (1/sqrt2)^k.
inline Eigen::MatrixXcd dense_matrix(const PauliString& p, bool normalized = false) {
    if (p.size() > 12) throw std::invalid_argument("dense_matrix: k > 12");
    // letter 0 is the most significant (leftmost) tensor factor
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t i = p.size(); i-- > 0;) {
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        const Eigen::Matrix2cd& l = letter_matrix(p.get(i));
        next.block(0, 0, m.rows(), m.cols()) = l(0, 0) * m;
        next.block(0, m.cols(), m.rows(), m.cols()) = l(0, 1) * m;
        next.block(m.rows(), 0, m.rows(), m.cols()) = l(1, 0) * m;
        next.block(m.rows(), m.cols(), m.rows(), m.cols()) = l(1, 1) * m;
        m = std::move(next);
    }
    if (normalized) m *= std::pow(0.5, 0.5 * static_cast<double>(p.size()));
    return m;
}

/// <<b|p>> = Tr(|b><b| p / sqrt2^k): per register I -> 1/sqrt2,
/// Z -> (-1)^bit / sqrt2, X/Y -> 0.
inline double basis_state_overlap(const PauliString& p, std::uint64_t bits) {
    double v = std::pow(0.5, 0.5 * static_cast<double>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        switch (p.get(i)) {
            case PauliLetter::I: break;
            case PauliLetter::Z:
                if ((bits >> i) & 1) v = -v;
                break;
            default: return 0.0;
        }
    }
    return v;
}

inline double basis_state_overlap(const PauliString& p, const std::string& bitstring) {
    if (p.size() != bitstring.size()) throw std::invalid_argument("overlap length mismatch");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < bitstring.size(); ++i) {
        if (bitstring[i] == '1') {
            bits |= 1ULL << i;
        } else if (bitstring[i] != '0') {
            throw std::invalid_argument("bad bitstring");
        }
    }
    return basis_state_overlap(p, bits);
}

/// Two-qubit Pauli code 0..15 = 4*first + second letter; the local unit
/// the moment engine works with.
inline PauliString pauli2(int code) {
    PauliString p(2);
    p.set(0, static_cast<PauliLetter>((code >> 2) & 3));
    p.set(1, static_cast<PauliLetter>(code & 3));
    return p;
}

inline int pauli2_code(PauliLetter a, PauliLetter b) {
    return 4 * static_cast<int>(a) + static_cast<int>(b);
}

inline int pauli2_code(const char* two) {
    return 4 * static_cast<int>(letter_from_char(two[0])) + static_cast<int>(letter_from_char(two[1]));
}

}  // namespace mqsvt
