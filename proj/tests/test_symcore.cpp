#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "renyi/symcore.hpp"

using namespace renyi;

namespace {

template <typename F>
ErrorCode code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::ConfigError;
}

Spectrum spec(std::vector<double> v) { return make_spectrum(v); }

} // namespace

TEST(MakeSpectrum, SortsDescending)
{
    const auto s = spec({0.2, 0.5, 0.3});
    ASSERT_EQ(s.dim(), 3U);
    EXPECT_DOUBLE_EQ(s[0], 0.5);
    EXPECT_DOUBLE_EQ(s[1], 0.3);
    EXPECT_DOUBLE_EQ(s[2], 0.2);
}

TEST(MakeSpectrum, Errors)
{
    EXPECT_EQ(code_of([] { (void)spec({1.0}); }), ErrorCode::DimensionTooSmall);
    EXPECT_EQ(code_of([] { (void)spec({0.5, 0.5, -0.1}); }), ErrorCode::NegativeEntry);
    EXPECT_EQ(code_of([] { (void)spec({0.5, 0.6}); }), ErrorCode::NotNormalized);
    EXPECT_EQ(code_of([] { (void)spec({0.5, NAN}); }), ErrorCode::NonFinite);
    EXPECT_EQ(code_of([] { (void)spec(std::vector<double>(21, 1.0 / 21)); }), ErrorCode::DimensionTooLarge);
}

TEST(MakeSpectrum, SlackWithinTolerance)
{
    const auto s = spec({0.5 + 5e-11, 0.5});
    EXPECT_NEAR(s[0] + s[1], 1.0, 1e-15);
    const auto z = spec({1.0, -5e-11});
    EXPECT_EQ(z[1], 0.0);
}

TEST(PowerSums, Examples)
{
    const auto a = power_sums(spec({0.5, 0.5}));
    EXPECT_DOUBLE_EQ(a[0], 2);
    EXPECT_DOUBLE_EQ(a[1], 1);
    EXPECT_DOUBLE_EQ(a[2], 0.5);
    const auto b = power_sums(spec({1, 0}));
    EXPECT_DOUBLE_EQ(b[2], 1);
    const auto c = power_sums(spec({0.5, 0.3, 0.2}));
    EXPECT_NEAR(c[2], 0.38, 1e-15);
    EXPECT_NEAR(c[3], 0.16, 1e-15);
}

TEST(ElemSym, Examples)
{
    const auto a = elem_sym_direct(spec({0.5, 0.5}));
    EXPECT_DOUBLE_EQ(a[0], 1);
    EXPECT_DOUBLE_EQ(a[1], 1);
    EXPECT_DOUBLE_EQ(a[2], 0.25);
    const auto b = elem_sym_direct(spec({0.5, 0.3, 0.2}));
    EXPECT_NEAR(b[2], 0.31, 1e-15);
    EXPECT_NEAR(b[3], 0.03, 1e-15);
    const auto c = elem_sym_direct(spec({0.25, 0.25, 0.25, 0.25}));
    for (std::size_t k = 0; k <= 4; ++k)
        EXPECT_NEAR(c[k], oracle::binomial(4, k) / std::pow(4.0, k), 1e-16);
}

TEST(ElemSym, MatchesSubsetEnumeration)
{
    for (const auto& s : oracle::ensemble(2, 12, 30, 11)) {
        const auto e = elem_sym_direct(s);
        const auto ref = oracle::elem_sym_bruteforce(s.values());
        for (std::size_t k = 0; k <= s.dim(); ++k)
            ASSERT_NEAR(e[k], ref[k], 1e-15);
    }
}

TEST(ElemFromPower, Examples)
{
    EXPECT_NEAR(elem_from_power(PowerSums({2, 1, 0.5}))[2], 0.25, 1e-15);
    EXPECT_NEAR(elem_from_power(PowerSums({3, 1, 0.38, 0.16}))[3], 0.03, 1e-15);
    EXPECT_NEAR(elem_from_power(PowerSums({4, 1, 0.25, 0.0625, 0.015625}))[4], 0.00390625, 1e-15);
}

TEST(PowerFromElem, Examples)
{
    EXPECT_NEAR(power_from_elem(ElemSym({1, 1, 0.25}))[2], 0.5, 1e-15);
    EXPECT_NEAR(power_from_elem(ElemSym({1, 1, 0.31, 0.03}))[3], 0.16, 1e-15);
    EXPECT_NEAR(power_from_elem(ElemSym({1, 1, 0.375, 0.0625, 0.00390625}))[4], 0.015625, 1e-15);
}

TEST(NewtonResidual, ConsistentAndMismatched)
{
    const auto u = spec({0.5, 0.5});
    EXPECT_LE(std::abs(newton_residual(elem_sym_direct(u), power_sums(u))), 1e-14);
    const auto s = spec({0.5, 0.3, 0.2});
    EXPECT_LE(std::abs(newton_residual(elem_sym_direct(s), power_sums(s))), 1e-14);
    const auto t = spec({0.6, 0.3, 0.1});
    EXPECT_GT(std::abs(newton_residual(elem_sym_direct(s), power_sums(t))), 1e-3);
}

TEST(Layout, LengthMismatch)
{
    EXPECT_EQ(code_of([] { (void)elem_from_power(PowerSums({3, 1, 0.5})); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([] { (void)newton_residual(ElemSym({1, 1, 0.25}), PowerSums({3, 1, 0.5, 0.2})); }),
              ErrorCode::LengthMismatch);
}

TEST(SpectrumFromElem, Examples)
{
    const auto a = spectrum_from_elem(ElemSym({1, 1, 0.25}));
    EXPECT_NEAR(a[0], 0.5, 1e-8);
    EXPECT_NEAR(a[1], 0.5, 1e-8);
    const auto b = spectrum_from_elem(ElemSym({1, 1, 0.1875}));
    EXPECT_NEAR(b[0], 0.75, 1e-14);
    EXPECT_NEAR(b[1], 0.25, 1e-14);
    EXPECT_EQ(code_of([] { (void)spectrum_from_elem(ElemSym({1, 1, 0.5})); }), ErrorCode::ComplexRoots);
    // t^2 + t - 0.1 has a positive root, i.e. a negative eigenvalue.
    EXPECT_EQ(code_of([] { (void)spectrum_from_elem(ElemSym({1, 1, -0.1})); }), ErrorCode::NegativeRoot);
    EXPECT_EQ(code_of([] { (void)spectrum_from_elem(ElemSym({2, 1, 0.1})); }), ErrorCode::InvalidInvariants);
}

TEST(SpectrumFromElem, DegenerateRoots)
{
    // An m-fold root is resolved to about eps^(1/m): 1e-34^(1/6) ~ 2e-6.
    const auto u = spec(std::vector<double>(6, 1.0 / 6));
    const auto back = spectrum_from_elem(elem_sym_direct(u.cast<quad>()));
    for (std::size_t j = 0; j < 6; ++j)
        EXPECT_NEAR(static_cast<double>(back[j]), 1.0 / 6, 1e-5);

    const auto triple = spec({0.3, 0.3, 0.3, 0.1});
    const auto t = spectrum_from_elem(elem_sym_direct(triple.cast<quad>()));
    for (std::size_t j = 0; j < 4; ++j)
        EXPECT_NEAR(static_cast<double>(t[j]), triple[j], 1e-10);

    // Double inputs: 2e-16^(1/6) ~ 2.5e-3.
    const auto d = spectrum_from_elem(elem_sym_direct(u));
    for (std::size_t j = 0; j < 6; ++j)
        EXPECT_NEAR(d[j], 1.0 / 6, 1e-2);
}

TEST(RoundTrip, QuadUpToTwelve)
{
    double worst = 0;
    for (const auto& s : oracle::ensemble(2, 12, 300, 21)) {
        const auto sq = s.cast<quad>().renormalized();
        const auto back = spectrum_from_elem(elem_from_power(power_sums(sq)));
        for (std::size_t j = 0; j < s.dim(); ++j)
            worst = std::max(worst, std::abs(static_cast<double>(back[j]) - s[j]));
    }
    EXPECT_LE(worst, 1e-8);
}

TEST(RoundTrip, QuadHighDimensions)
{
    double worst = 0;
    for (const auto& s : oracle::ensemble(13, 20, 40, 22)) {
        const auto sq = s.cast<quad>().renormalized();
        const auto back = spectrum_from_elem(elem_from_power(power_sums(sq)));
        for (std::size_t j = 0; j < s.dim(); ++j)
            worst = std::max(worst, std::abs(static_cast<double>(back[j]) - s[j]));
    }
    EXPECT_LE(worst, 1e-6);
}

TEST(RoundTrip, DoubleSmallDimensions)
{
    for (const auto& s : oracle::ensemble(2, 5, 200, 23)) {
        const auto back = spectrum_from_elem(elem_from_power(power_sums(s)));
        for (std::size_t j = 0; j < s.dim(); ++j)
            ASSERT_NEAR(back[j], s[j], 1e-8);
    }
}

TEST(Properties, DirectAgreesWithNewton)
{
    for (const auto& s : oracle::ensemble(2, 12, 200, 24)) {
        const auto a = elem_sym_direct(s);
        const auto b = elem_from_power(power_sums(s));
        for (std::size_t k = 0; k <= s.dim(); ++k)
            ASSERT_NEAR(a[k], b[k], 1e-12);
    }
}

TEST(Properties, ResidualSmall)
{
    for (const auto& s : oracle::ensemble(2, 12, 200, 25))
        ASSERT_LE(std::abs(newton_residual(elem_sym_direct(s), power_sums(s))), 1e-13);
}

TEST(Properties, Bounds)
{
    for (const auto& s : oracle::ensemble(2, 12, 100, 26)) {
        const std::size_t d = s.dim();
        const auto r = power_sums(s);
        const auto e = elem_sym_direct(s);
        for (std::size_t q = 2; q <= d; ++q) {
            ASSERT_GE(r[q], std::pow(static_cast<double>(d), 1.0 - static_cast<double>(q)) * (1 - 1e-12));
            ASSERT_LE(r[q], 1 + 1e-15);
        }
        for (std::size_t k = 2; k <= d; ++k) {
            ASSERT_GE(e[k], 0);
            ASSERT_LE(e[k], oracle::binomial(d, k) / std::pow(static_cast<double>(d), k) * (1 + 1e-12));
        }
    }
}

TEST(Jacobian, Examples)
{
    const auto e4 = elem_sym_direct(spec({0.25, 0.25, 0.25, 0.25}));
    const auto je = jacobian_e_wrt_r(e4);
    EXPECT_DOUBLE_EQ(je(2, 2), -0.5);
    EXPECT_DOUBLE_EQ(je(3, 2), -0.5);
    EXPECT_DOUBLE_EQ(je(3, 3), 1.0 / 3);
    EXPECT_DOUBLE_EQ(je(4, 2), -0.1875);
    EXPECT_DOUBLE_EQ(je(4, 4), -0.25);
    EXPECT_EQ(je(2, 3), 0.0);
    const auto jr = jacobian_r_wrt_e(e4);
    EXPECT_NEAR(jr(2, 2), -2, 1e-14);
    EXPECT_NEAR(jr(3, 3), 3, 1e-14);
    EXPECT_NEAR(jr(4, 2), -2.5, 1e-14);
}

TEST(Jacobian, InverseOfRecursionDerivative)
{
    for (const auto& s : oracle::ensemble(2, 12, 50, 27)) {
        const auto e = elem_sym_direct(s);
        const auto jr = jacobian_r_wrt_e(e);
        const auto ref = oracle::dr_de_by_recursion(e);
        for (std::size_t k = 2; k <= s.dim(); ++k)
            for (std::size_t l = 2; l <= s.dim(); ++l)
                ASSERT_NEAR(jr(k, l), ref[k][l], 1e-12 * std::max(1.0, std::abs(ref[k][l])));
    }
}

TEST(Jacobian, ProductIsIdentity)
{
    for (const auto& s : oracle::ensemble(2, 12, 50, 28)) {
        const auto e = elem_sym_direct(s);
        const auto je = jacobian_e_wrt_r(e);
        const auto jr = jacobian_r_wrt_e(e);
        const std::size_t d = s.dim();
        for (std::size_t k = 2; k <= d; ++k)
            for (std::size_t l = 2; l <= d; ++l) {
                double acc = 0;
                for (std::size_t m = 2; m <= d; ++m)
                    acc += jr(k, m) * je(m, l);
                ASSERT_NEAR(acc, k == l ? 1.0 : 0.0, 1e-12);
            }
    }
}

TEST(Jacobian, SignPattern)
{
    for (const auto& s : oracle::ensemble(2, 12, 200, 29)) {
        const auto jr = jacobian_r_wrt_e(elem_sym_direct(s));
        for (std::size_t k = 2; k <= s.dim(); ++k)
            for (std::size_t l = 2; l <= s.dim(); ++l) {
                if (l % 2 == 0)
                    ASSERT_LE(jr(k, l), 1e-12);
                else
                    ASSERT_GE(jr(k, l), -1e-12);
            }
    }
}

TEST(Jacobian, CentralDifferences)
{
    const quad h = 1e-6Q;
    double worst = 0;
    for (std::size_t d = 3; d <= 10; ++d)
        for (std::size_t i = 0; i < 20; ++i) {
            const auto s = harness::sample_for(31, d, i).cast<quad>();
            const auto r = power_sums(s);
            const auto je = jacobian_e_wrt_r(elem_from_power(r));
            for (std::size_t l = 2; l <= d; ++l) {
                auto up = r, down = r;
                up[l] += h;
                down[l] -= h;
                const auto eu = elem_from_power(up), ed = elem_from_power(down);
                for (std::size_t k = 2; k <= d; ++k) {
                    const double fd = static_cast<double>((eu[k] - ed[k]) / (2 * h));
                    const double exact = static_cast<double>(je(k, l));
                    const double err = exact == 0 ? std::abs(fd) : std::abs(fd - exact) / std::abs(exact);
                    worst = std::max(worst, err);
                }
            }
        }
    EXPECT_LE(worst, 1e-6);
}

TEST(Spectrum, RenormalizedInBinary128)
{
    for (std::size_t d : {3U, 9U, 12U})
        for (std::uint64_t i = 0; i < 50; ++i) {
            const auto s = harness::sample_for(5, d, i).cast<quad>();
            const auto n = s.renormalized();
            quad sum = 0;
            for (std::size_t j = 0; j < d; ++j) {
                sum += n[j];
                EXPECT_LE(fabsq(n[j] - s[j]), 1e-15Q);
                if (j > 0)
                    EXPECT_GE(n[j - 1], n[j]);
            }
            EXPECT_LE(fabsq(sum - 1), 1e-32Q);
        }
}
