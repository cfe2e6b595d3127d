#include <gtest/gtest.h>

#include <map>

#include "mqsvt/moments.hpp"
#include "mqsvt/rng.hpp"
#include "mqsvt/verify.hpp"

using namespace mqsvt;

namespace {
std::array<int, 4> codes(const char* a, const char* b, const char* c, const char* d) {
    return {pauli2_code(a), pauli2_code(b), pauli2_code(c), pauli2_code(d)};
}
}  // namespace

// The defining property of the Weingarten function: it is the inverse of
// the Gram matrix of permutation operators, i.e. for every sigma in S4
// sum_pi Wg(sigma^-1 pi) * 4^{#cycles(pi)} = [sigma == id].
TEST(Weingarten, DefiningConvolutionIdentity) {
    for (const auto& sigma : all_s4()) {
        Rational acc(0);
        for (const auto& pi : all_s4()) {
            const auto rel = sigma.inverse().compose(pi);
            const int ncyc = cycle_count(pi);
            acc += weingarten_s4(cyclic_partition(rel)) * rational(std::int64_t{1} << (2 * ncyc));
        }
        EXPECT_EQ(acc, Rational(sigma == Permutation::identity(4) ? 1 : 0));
    }
}

// The published variant (32/Delta on [2,2]) fails the same identity,
// which is how the corrected value was pinned down.
TEST(Weingarten, PrintedTableVariantFailsTheIdentity) {
    bool all_hold = true;
    for (const auto& sigma : all_s4()) {
        Rational acc(0);
        for (const auto& pi : all_s4()) {
            const auto rel = sigma.inverse().compose(pi);
            const int ncyc = cycle_count(pi);
            acc += weingarten_s4_printed(cyclic_partition(rel)) * rational(std::int64_t{1} << (2 * ncyc));
        }
        if (acc != Rational(sigma == Permutation::identity(4) ? 1 : 0)) all_hold = false;
    }
    EXPECT_FALSE(all_hold);
}

TEST(Weingarten, Values) {
    EXPECT_EQ(weingarten_s4({4}), rational(-20, 20160));
    EXPECT_EQ(weingarten_s4({3, 1}), rational(29, 20160));
    EXPECT_EQ(weingarten_s4({2, 2}), rational(22, 20160));
    EXPECT_EQ(weingarten_s4({2, 1, 1}), rational(-48, 20160));
    EXPECT_EQ(weingarten_s4({1, 1, 1, 1}), rational(134, 20160));
    EXPECT_THROW(weingarten_s4({5}), std::invalid_argument);
}

TEST(MomentT2, CaseTable) {
    const int ii = pauli2_code("II");
    EXPECT_EQ(moment_t2(ii, ii, ii, ii), Rational(1));
    EXPECT_EQ(moment_t2(pauli2_code("ZZ"), pauli2_code("ZZ"), pauli2_code("XY"), pauli2_code("XY")),
              rational(1, 15));
    EXPECT_EQ(moment_t2(pauli2_code("ZZ"), pauli2_code("ZI"), pauli2_code("ZI"), pauli2_code("ZI")),
              Rational(0));
    EXPECT_EQ(moment_t2(ii, ii, pauli2_code("ZZ"), pauli2_code("ZZ")), Rational(0));
    EXPECT_EQ(moment_t2(pauli2_code("ZZ"), pauli2_code("ZZ"), ii, ii), Rational(0));
}

// Order-4 entries with two identity copies must reduce to order-2 ones.
TEST(MomentT4, ReducesToT2WithIdentityCopies) {
    const int ii = pauli2_code("II");
    for (int s = 0; s < 16; ++s) {
        for (int sp = 0; sp < 16; ++sp) {
            EXPECT_EQ(moment_t4_weingarten({ii, ii, s, s}, {ii, ii, sp, sp}), moment_t2(s, s, sp, sp))
                << pauli2(s).str() << " " << pauli2(sp).str();
        }
    }
}

TEST(MomentT4, FrozenTableMatchesWeingartenSumExhaustively) {
    for (const auto& c : t4_cases()) {
        for (const auto& [ins, outs] : c.tuples) {
            EXPECT_EQ(moment_t4_weingarten(ins, outs),
                      Rational(BigInt(c.frozen_num(ins, outs)), BigInt(kT4Denominator)))
                << c.block << " / " << c.selector;
            EXPECT_EQ(moment_t4_table(ins, outs), moment_t4_weingarten(ins, outs));
        }
    }
    EXPECT_THROW(moment_t4_table(codes("XY", "ZI", "II", "II"), codes("II", "II", "II", "II")),
                 std::invalid_argument);
}

TEST(MomentT4, SpotValues) {
    // canonical-path first and later layers
    EXPECT_EQ(moment_t4_weingarten(codes("ZZ", "ZI", "ZZ", "ZI"), codes("ZI", "ZI", "ZI", "ZI")),
              rational(12288, kT4Denominator));  // 1/420
    EXPECT_EQ(moment_t4_weingarten(codes("ZI", "ZI", "ZI", "ZI"), codes("ZI", "ZI", "ZI", "ZI")),
              rational(73728, kT4Denominator));  // 1/70
    // rows that were published as nonzero but are exactly zero
    EXPECT_EQ(moment_t4_weingarten(codes("ZZ", "ZI", "IZ", "II"), codes("ZI", "ZI", "ZI", "ZI")), Rational(0));
    EXPECT_EQ(moment_t4_weingarten(codes("ZZ", "ZI", "XX", "XY"), codes("ZI", "ZI", "ZI", "ZI")), Rational(0));
    // the one negative class along the canonical-path analysis
    EXPECT_EQ(moment_t4_weingarten(codes("ZZ", "ZI", "ZZ", "ZI"), codes("ZI", "ZI", "XI", "XI")),
              rational(-3072, kT4Denominator));
    EXPECT_EQ(moment_t4_weingarten(codes("ZZ", "ZI", "ZZ", "ZI"), codes("ZI", "ZI", "IX", "IX")),
              rational(2048, kT4Denominator));
}

// Haar-moment copy-exchange symmetry: permuting the four copies (same
// permutation on inputs and outputs) leaves the entry unchanged.
TEST(MomentT4, CopyExchangeSymmetry) {
    Prng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::array<int, 4> ins, outs;
        for (int i = 0; i < 4; ++i) {
            ins[i] = static_cast<int>(rng.next_below(16));
            outs[i] = static_cast<int>(rng.next_below(16));
        }
        const Rational base = moment_t4_weingarten(ins, outs);
        for (const auto& sigma : all_s4()) {
            std::array<int, 4> pins, pouts;
            for (int i = 0; i < 4; ++i) {
                pins[i] = ins[static_cast<std::size_t>(sigma(i))];
                pouts[i] = outs[static_cast<std::size_t>(sigma(i))];
            }
            EXPECT_EQ(moment_t4_weingarten(pins, pouts), base);
        }
    }
}

TEST(MomentT4, EntriesBoundedByOne) {
    Prng rng(29);
    for (int trial = 0; trial < 300; ++trial) {
        std::array<int, 4> ins, outs;
        for (int i = 0; i < 4; ++i) {
            ins[i] = static_cast<int>(rng.next_below(16));
            outs[i] = static_cast<int>(rng.next_below(16));
        }
        const Rational v = moment_t4_weingarten(ins, outs);
        EXPECT_LE(boost::multiprecision::abs(boost::multiprecision::numerator(v)),
                  boost::multiprecision::denominator(v));
    }
    for (const auto& c : t4_cases()) {
        for (const auto& [ins, outs] : c.tuples) {
            const Rational v = moment_t4_weingarten(ins, outs);
            EXPECT_LE(boost::multiprecision::abs(boost::multiprecision::numerator(v)),
                      boost::multiprecision::denominator(v));
        }
    }
}

TEST(MomentMc, AllIdentityOrderFourIsExactlyOne) {
    const std::array<int, 4> ii = {0, 0, 0, 0};
    const auto est = moment_mc(ii, ii, 4, 1000, 99);
    EXPECT_EQ(est.estimate, 1.0);
    EXPECT_EQ(est.stderr_, 0.0);
}

TEST(MomentMc, AgreesWithExactValues) {
    struct Case {
        std::array<int, 4> ins, outs;
        int t;
    };
    const std::vector<Case> cases = {
        {codes("ZZ", "ZZ", "XY", "XY"), codes("ZZ", "ZZ", "XY", "XY"), 2},  // only first two used at t=2
        {codes("ZZ", "ZI", "ZZ", "ZI"), codes("ZI", "ZI", "ZI", "ZI"), 4},
        {codes("ZI", "ZI", "ZI", "ZI"), codes("ZI", "ZI", "ZI", "ZI"), 4},
        {codes("ZZ", "ZI", "IZ", "II"), codes("ZI", "ZI", "ZI", "ZI"), 4},
        {codes("ZZ", "ZI", "ZZ", "ZI"), codes("ZI", "ZI", "XI", "XI"), 4},
    };
    std::uint64_t seed = 1000;
    for (const auto& c : cases) {
        const int t = c.t;
        double exact;
        if (t == 2) {
            exact = to_double(moment_t2(c.ins[0], c.ins[1], c.outs[0], c.outs[1]));
        } else {
            exact = to_double(moment_t4_weingarten(c.ins, c.outs));
        }
        const auto est = moment_mc(std::span<const int>(c.ins.data(), t),
                                   std::span<const int>(c.outs.data(), t), t, 40000, seed++);
        EXPECT_NEAR(est.estimate, exact, 3 * est.stderr_ + 1e-12);
    }
}

TEST(MomentMc, DeterministicAndWorkerIndependent) {
    const std::array<int, 4> ins = codes("ZZ", "ZI", "ZZ", "ZI");
    const std::array<int, 4> outs = codes("ZI", "ZI", "ZI", "ZI");
    const auto a = moment_mc(ins, outs, 4, 8192, 5, 1);
    const auto b = moment_mc(ins, outs, 4, 8192, 5, 4);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.stderr_, b.stderr_);
    EXPECT_THROW(moment_mc(ins, outs, 4, 50, 5), std::invalid_argument);
    EXPECT_THROW(moment_mc(ins, outs, 3, 500, 5), std::invalid_argument);
}

// A tampered table constant must be caught by the verify pass.
TEST(MomentsVerify, DetectsTamperedTableValue) {
    auto cases = t4_cases();
    bool consistent = true;
    std::string failing;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        for (const auto& [ins, outs] : cases[ci].tuples) {
            std::int64_t frozen = cases[ci].frozen_num(ins, outs);
            if (ci == 0) frozen += 64;  // inject the fault in the first case
            if (moment_t4_weingarten(ins, outs) != Rational(BigInt(frozen), BigInt(kT4Denominator))) {
                consistent = false;
                failing = cases[ci].selector;
            }
        }
    }
    EXPECT_FALSE(consistent);
    EXPECT_EQ(failing, cases[0].selector);
}

TEST(MomentsVerify, ExactOnlyPassesAndFlagsPrintedConstants) {
    const auto res = moments_verify(0, 0, /*exact_only=*/true);
    EXPECT_TRUE(res.engine_consistent);
    EXPECT_TRUE(res.mc_consistent);
    EXPECT_FALSE(res.printed_consistent);
    // every t2 row reproduces its published value; the t4 blocks do not
    for (const auto& r : res.t2_rows) EXPECT_TRUE(r.table_matches_exact);
}
