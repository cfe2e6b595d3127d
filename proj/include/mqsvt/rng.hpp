#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace mqsvt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a master seed and a list of
/// stream coordinates (domain tag, circuit index, layer, gate, ...).
/// Every parallel work unit gets its own stream, so results do not
/// depend on scheduling or worker count.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    for (std::uint64_t p : path) {
        s = h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
        h = splitmix64(s);
    }
    return h;
}

/// Counter-based PRNG built on splitmix64. Fully specified here (no
/// library distributions) so streams are identical everywhere.
class Prng {
  public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in {0, 1, ..., bound-1} via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    /// Standard normal via Box-Muller, one spare cached.
    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Haar-random 4x4 unitary: complex Ginibre matrix, QR decomposition,
/// phases fixed by the diagonal of R.
inline Eigen::Matrix4cd haar_unitary4(Prng& rng) {
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            g(i, j) = std::complex<double>(rng.next_gauss(), rng.next_gauss());
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
    Eigen::Matrix4cd q = qr.householderQ();
    Eigen::Matrix4cd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 4; ++j) {
        const std::complex<double> d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0) ? d / a : std::complex<double>(1, 0);
    }
    return q;
}

}  // namespace mqsvt
