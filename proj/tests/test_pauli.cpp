#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "mqsvt/pauli.hpp"
#include "mqsvt/rng.hpp"

using namespace mqsvt;

namespace {

PauliString random_string(Prng& rng, int k) {
    PauliString p(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) p.set(static_cast<std::size_t>(i), static_cast<PauliLetter>(rng.next_below(4)));
    return p;
}

}  // namespace

TEST(Pauli, MultiplySingleLetterExamples) {
    auto [ph1, r1] = multiply(PauliString::parse("X"), PauliString::parse("Y"));
    EXPECT_EQ(ph1.exp, 1);  // XY = iZ
    EXPECT_EQ(r1.str(), "Z");

    auto [ph2, r2] = multiply(PauliString::parse("Z"), PauliString::parse("Z"));
    EXPECT_EQ(ph2.exp, 0);
    EXPECT_EQ(r2.str(), "I");

    auto [ph3, r3] = multiply(PauliString::parse("XZ"), PauliString::parse("ZZ"));
    EXPECT_EQ(ph3.exp, 3);  // XZ * ZZ = (-iY) x I
    EXPECT_EQ(r3.str(), "YI");
}

TEST(Pauli, MultiplyLengthMismatchThrows) {
    EXPECT_THROW(multiply(PauliString::parse("XX"), PauliString::parse("X")), std::invalid_argument);
}

TEST(Pauli, MultiplyAgreesWithDenseProductExhaustively) {
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            const PauliString p = pauli2(a), q = pauli2(b);
            auto [ph, r] = multiply(p, q);
            const Eigen::MatrixXcd lhs = dense_matrix(p) * dense_matrix(q);
            const Eigen::MatrixXcd rhs = ph.value() * dense_matrix(r);
            EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14) << p.str() << " * " << q.str();
        }
    }
}

TEST(Pauli, SelfProductIsIdentity) {
    Prng rng(11);
    for (int t = 0; t < 100; ++t) {
        const PauliString p = random_string(rng, 1 + static_cast<int>(rng.next_below(8)));
        auto [ph, r] = multiply(p, p);
        EXPECT_EQ(ph.exp, 0);
        EXPECT_TRUE(r.is_identity());
    }
}

TEST(Pauli, DenseMatrixExamples) {
    EXPECT_LT((dense_matrix(PauliString::parse("I")) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(),
              1e-15);
    Eigen::MatrixXcd z_norm = dense_matrix(PauliString::parse("Z"), true);
    EXPECT_NEAR(z_norm(0, 0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(z_norm(1, 1).real(), -1.0 / std::sqrt(2.0), 1e-15);
    Eigen::MatrixXcd zz = dense_matrix(PauliString::parse("ZZ"), true);
    Eigen::Vector4d diag(0.5, -0.5, -0.5, 0.5);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(zz(i, i).real(), diag(i), 1e-15);
    EXPECT_THROW(dense_matrix(PauliString::identity(13)), std::invalid_argument);
}

TEST(Pauli, TensorOrderMatchesKron) {
    // register 0 is the first (leftmost) tensor factor
    const Eigen::MatrixXcd zi = dense_matrix(PauliString::parse("ZI"));
    const Eigen::MatrixXcd kron =
        Eigen::kroneckerProduct(letter_matrix(PauliLetter::Z), letter_matrix(PauliLetter::I)).eval();
    EXPECT_LT((zi - kron).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Pauli, BasisStateOverlapExamples) {
    EXPECT_NEAR(basis_state_overlap(PauliString::parse("Z"), std::string("0")), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_EQ(basis_state_overlap(PauliString::parse("X"), std::string("0")), 0.0);
    EXPECT_NEAR(basis_state_overlap(PauliString::parse("ZZII"), std::string("0100")), -0.25, 1e-15);
    EXPECT_THROW(basis_state_overlap(PauliString::parse("ZZ"), std::string("0")), std::invalid_argument);
}

TEST(Pauli, OverlapAgainstDenseTrace) {
    Prng rng(5);
    for (int t = 0; t < 50; ++t) {
        const int k = 1 + static_cast<int>(rng.next_below(5));
        const PauliString p = random_string(rng, k);
        const std::uint64_t bits = rng.next_below(std::uint64_t{1} << k);
        std::uint64_t idx = 0;  // register 0 is the most significant index bit
        for (int r = 0; r < k; ++r) {
            if ((bits >> r) & 1) idx |= std::uint64_t{1} << (k - 1 - r);
        }
        const Eigen::MatrixXcd m = dense_matrix(p, true);
        EXPECT_NEAR(basis_state_overlap(p, bits), m(static_cast<int>(idx), static_cast<int>(idx)).real(), 1e-13);
    }
}

TEST(Pauli, OverlapBoundWithEqualityIffDiagonal) {
    Prng rng(7);
    for (int t = 0; t < 200; ++t) {
        const int k = 1 + static_cast<int>(rng.next_below(6));
        const PauliString p = random_string(rng, k);
        const std::uint64_t bits = rng.next_below(std::uint64_t{1} << k);
        const double v = basis_state_overlap(p, bits);
        const double bound = std::pow(0.5, k);
        EXPECT_LE(v * v, bound + 1e-15);
        bool has_xy = false;
        for (int i = 0; i < k; ++i) {
            const PauliLetter l = p.get(static_cast<std::size_t>(i));
            if (l == PauliLetter::X || l == PauliLetter::Y) has_xy = true;
        }
        if (has_xy) {
            EXPECT_EQ(v, 0.0);
        } else {
            EXPECT_NEAR(v * v, bound, 1e-15);
        }
    }
}

TEST(Pauli, IdentityExpansionCompleteness) {
    for (int k = 1; k <= 6; ++k) {
        const PauliString id = PauliString::identity(static_cast<std::size_t>(k));
        double total = 0;
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << k); ++b) {
            total += basis_state_overlap(id, b) * std::pow(0.5, 0.5 * k);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Pauli, ParsePrintRoundTrip) {
    Prng rng(3);
    for (int t = 0; t < 100; ++t) {
        const PauliString p = random_string(rng, 1 + static_cast<int>(rng.next_below(12)));
        EXPECT_EQ(PauliString::parse(p.str()), p);
    }
    EXPECT_THROW(PauliString::parse("ZIQ"), std::invalid_argument);
}
