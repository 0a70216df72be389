#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "oracles.hpp"
#include "renyi/entropy.hpp"
#include "renyi/reconstruct.hpp"

using namespace renyi;

namespace {

Spectrum spec(std::vector<double> v) { return make_spectrum(v); }

double min_gap(const Spectrum& s)
{
    double g = 1;
    for (std::size_t j = 1; j < s.dim(); ++j)
        g = std::min(g, s[j - 1] - s[j]);
    return g;
}

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

} // namespace

TEST(Renyi, Examples)
{
    EXPECT_NEAR(renyi_entropy(spec({1.0 / 3, 1.0 / 3, 1.0 / 3}), 2), std::log(3.0), 1e-15);
    EXPECT_EQ(renyi_entropy(spec({1, 0, 0}), 2), 0.0);
    EXPECT_EQ(renyi_entropy(spec({1, 0, 0}), 3), 0.0);
    EXPECT_NEAR(renyi_entropy(spec({0.75, 0.25}), 2), -std::log(0.625), 1e-15);
    EXPECT_NEAR(renyi_entropy(spec({0.75, 0.25}), 2), 0.4700036, 1e-7);

    const auto u = renyi_vector(spec({0.25, 0.25, 0.25, 0.25}));
    ASSERT_EQ(u.values().size(), 3U);
    for (double v : u.values())
        EXPECT_NEAR(v, std::log(4.0), 1e-15);
    const auto p = renyi_vector(spec({1, 0, 0}));
    EXPECT_EQ(p.at(2), 0.0);
    EXPECT_EQ(p.at(3), 0.0);
    const auto s = renyi_vector(spec({0.5, 0.3, 0.2}));
    EXPECT_NEAR(s.at(2), 0.9675840, 1e-7);
    EXPECT_NEAR(s.at(3), 0.9162907, 1e-7);
}

TEST(Renyi, OrderOutOfRange)
{
    EXPECT_EQ(code_of([] { (void)renyi_entropy(spec({0.5, 0.5}), 1); }), ErrorCode::OrderOutOfRange);
    EXPECT_EQ(code_of([] { (void)renyi_entropy(spec({0.5, 0.5}), 3); }), ErrorCode::OrderOutOfRange);
}

TEST(VonNeumann, DirectExamples)
{
    for (std::size_t d : {2U, 5U, 13U})
        EXPECT_NEAR(von_neumann_direct(spec(std::vector<double>(d, 1.0 / static_cast<double>(d)))),
                    std::log(static_cast<double>(d)), 1e-13);
    EXPECT_EQ(von_neumann_direct(spec({1, 0})), 0.0);
    EXPECT_NEAR(von_neumann_direct(spec({0.75, 0.25})), 0.5623351, 1e-7);
}

TEST(VonNeumann, IntegralExamples)
{
    EXPECT_NEAR(von_neumann_integral(ElemSym({1, 1, 0.25})), std::log(2.0), 1e-9);
    EXPECT_NEAR(von_neumann_integral(ElemSym({1, 1, 0.1875})), 0.5623351, 1e-7);
    const double hand = -(0.5 * std::log(0.5) + 0.3 * std::log(0.3) + 0.2 * std::log(0.2));
    EXPECT_NEAR(von_neumann_integral(elem_sym_direct(spec({0.5, 0.3, 0.2}))), hand, 1e-9);
    EXPECT_NEAR(hand, 1.0296530, 1e-7);
}

TEST(VonNeumann, IntegralAcceptsPureState)
{
    EXPECT_NEAR(von_neumann_integral(elem_sym_direct(spec({1, 0, 0}))), 0.0, 1e-9);
}

TEST(VonNeumann, ScalarIdentity)
{
    for (double x : {0.1, 0.5, 0.9}) {
        EXPECT_NEAR(neg_xlogx_integral(x), -x * std::log(x), 1e-10);
        // Same integral by an unrelated rule.
        const double ref =
            1 - x - oracle::simpson_log_axis([x](double t) { return std::log1p((1 - x) / (t + x)) - (1 - x) / (t + 1); });
        EXPECT_NEAR(ref, -x * std::log(x), 1e-9);
    }
}

TEST(VonNeumann, IntegralMatchesDirect)
{
    double worst = 0;
    for (const auto& s : oracle::ensemble(2, 10, 300, 41)) {
        if (s.min() < 1e-6)
            continue;
        worst = std::max(worst, std::abs(von_neumann_integral(elem_sym_direct(s)) - von_neumann_direct(s)));
    }
    EXPECT_LE(worst, 1e-8);
}

TEST(VonNeumann, NegativeInvariantsRejected)
{
    EXPECT_EQ(code_of([] { (void)von_neumann_integral(ElemSym({1, 1, -0.1})); }), ErrorCode::InvalidInvariants);
}

TEST(Gradient, Examples)
{
    const auto u = entropy_gradient(ElemSym({1, 1, 0.25}));
    EXPECT_NEAR(u.de(2), 2.0, 1e-9);
    EXPECT_NEAR(u.dr(2), -1.0, 1e-9);

    const auto g = entropy_gradient(ElemSym({1, 1, 0.1875}));
    EXPECT_NEAR(g.de(2), std::log(3.0) / 0.5, 1e-9);
    EXPECT_NEAR(g.de(2), 2.1972246, 1e-7);
    const double simpson = oracle::simpson_log_axis([](double t) { return 1 / ((t + 0.75) * (t + 0.25)); });
    EXPECT_NEAR(g.de(2), simpson, 1e-8);

    EXPECT_NEAR(g.dSq(2), oracle::one_dimensional_dS_dS2(0.75), 1e-10);
    EXPECT_NEAR(g.dSq(2), 0.6866334, 1e-6);
}

TEST(Gradient, NearUniformLimit)
{
    const double p = 0.5 + 1e-4;
    const auto g = entropy_gradient(elem_sym_direct(spec({p, 1 - p})));
    const double ref = oracle::one_dimensional_dS_dS2(p);
    EXPECT_NEAR(g.dSq(2), ref, 1e-3);
    // S = log 2 - 2 delta^2 and S_2 = log 2 - 4 delta^2 to second order.
    EXPECT_NEAR(ref, 0.5, 1e-3);
}

TEST(Gradient, SeparateEntryPointsAgree)
{
    const auto e = elem_sym_direct(spec({0.5, 0.3, 0.15, 0.05}));
    const auto g = entropy_gradient(e);
    EXPECT_EQ(dS_de(e), g.dS_de);
    EXPECT_EQ(dS_dr(e), g.dS_dr);
    EXPECT_EQ(dS_dSq(e), g.dS_dSq);
    EXPECT_EQ(push_e_to_r(e, g.dS_de), g.dS_dr);
    EXPECT_EQ(push_r_to_renyi(e, g.dS_dr), g.dS_dSq);
}

TEST(Gradient, SingularSpectrum)
{
    EXPECT_EQ(code_of([] { (void)dS_de(elem_sym_direct(spec({0.7, 0.3, 0.0}))); }), ErrorCode::SingularSpectrum);
    EXPECT_EQ(code_of([] { (void)dS_dSq(elem_sym_direct(spec({1 - 1e-11, 1e-11}))); }),
              ErrorCode::SingularSpectrum);
}

TEST(Gradient, MatchesFiniteDifferencesInE)
{
    const double h = 1e-6;
    double worst = 0;
    std::size_t used = 0;
    for (const auto& s : oracle::ensemble(2, 5, 60, 42)) {
        const auto e = elem_sym_direct(s);
        // Interior points only: the step must be small against e_d.
        if (s.min() < 1e-3 || e[s.dim()] < 1e-3)
            continue;
        ++used;
        const auto g = dS_de(e, 1e-13);
        for (std::size_t k = 2; k <= s.dim(); ++k) {
            auto up = e, down = e;
            up[k] += h;
            down[k] -= h;
            const double fd = (von_neumann_integral(up, 1e-13) - von_neumann_integral(down, 1e-13)) / (2 * h);
            worst = std::max(worst, std::abs(fd - g[k - 2]) / std::abs(g[k - 2]));
        }
    }
    EXPECT_GT(used, 40U);
    EXPECT_LE(worst, 1e-5);
}

TEST(Gradient, ChainMatchesFiniteDifferencesInRenyi)
{
    // Reconstruction runs in binary128, so a small step keeps truncation
    // error negligible near the edge of the feasible region.
    const quad h = 1e-9Q;
    double worst = 0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    for (const auto& s : oracle::ensemble(2, 6, 40, 43)) {
        if (s.min() < 1e-2 || min_gap(s) < 1e-2)
            continue;
        const auto g = dS_dSq(elem_sym_direct(s));
        const auto rv = renyi_vector(s.cast<quad>());
        for (std::size_t q = 2; q <= s.dim(); ++q) {
            auto up = rv.values(), down = rv.values();
            up[q - 2] += h;
            down[q - 2] -= h;
            quad s_up = 0, s_down = 0;
            try {
                s_up = reconstruct_spectrum(BasicRenyiVector<quad>(s.dim(), up)).von_neumann;
                s_down = reconstruct_spectrum(BasicRenyiVector<quad>(s.dim(), down)).von_neumann;
            } catch (const InfeasibleError&) {
                // The perturbation left the feasible region.
                ++skipped;
                continue;
            }
            ++used;
            const double fd = static_cast<double>((s_up - s_down) / (2 * h));
            worst = std::max(worst, std::abs(fd - g[q - 2]) / std::max(1.0, std::abs(g[q - 2])));
        }
    }
    std::printf("chain FD: %zu used, %zu skipped, worst %.3e\n", used, skipped, worst);
    EXPECT_GT(used, 40U);
    EXPECT_LT(skipped, used);
    EXPECT_LE(worst, 1e-5);
}

TEST(Gradient, SignCertificates)
{
    double even_min = 1e300, odd_max = -1e300, de_min = 1e300, dr_even_max = -1e300, dr_odd_min = 1e300;
    for (const auto& s : oracle::ensemble(2, 8, 300, 44)) {
        if (s.min() < defaults::pos_floor)
            continue;
        const auto g = entropy_gradient(elem_sym_direct(s));
        for (std::size_t q = 2; q <= s.dim(); ++q) {
            de_min = std::min(de_min, g.de(q));
            if (q % 2 == 0) {
                even_min = std::min(even_min, g.dSq(q));
                dr_even_max = std::max(dr_even_max, g.dr(q));
            } else {
                odd_max = std::max(odd_max, g.dSq(q));
                dr_odd_min = std::min(dr_odd_min, g.dr(q));
            }
        }
    }
    EXPECT_GE(even_min, -1e-10);
    EXPECT_LE(odd_max, 1e-10);
    EXPECT_GE(de_min, -1e-10);
    EXPECT_LE(dr_even_max, 1e-10);
    EXPECT_GE(dr_odd_min, -1e-10);
}

TEST(Gradient, PartialFractionEquivalence)
{
    double worst = 0;
    std::size_t used = 0;
    for (const auto& s : oracle::ensemble(2, 8, 100, 45)) {
        if (min_gap(s) < 1e-3 || s.min() < 1e-6)
            continue;
        ++used;
        const auto g = dS_de(elem_sym_direct(s));
        for (std::size_t k = 2; k <= s.dim(); ++k) {
            const double ref = static_cast<double>(oracle::dS_de_partial_fractions(s.values(), k));
            worst = std::max(worst, std::abs(g[k - 2] - ref) / std::max(1.0, std::abs(ref)));
        }
    }
    EXPECT_GT(used, 100U);
    EXPECT_LE(worst, 1e-8);
}
