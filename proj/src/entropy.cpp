#include "renyi/entropy.hpp"

#include <cmath>

#include "renyi/quadrature.hpp"

namespace renyi {

namespace {

void require_invariants(const ElemSym& e)
{
    if (e.size() < 3)
        throw Error(ErrorCode::LengthMismatch, "need e_0..e_d with d >= 2");
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (!std::isfinite(e[k]))
            throw Error(ErrorCode::NonFinite, "non-finite invariant e_" + std::to_string(k));
        if (e[k] < -defaults::norm_tol)
            throw Error(ErrorCode::InvalidInvariants,
                        "e_" + std::to_string(k) + " = " + std::to_string(e[k]) + " is negative");
    }
}

void require_positive_spectrum(const ElemSym& e, double pos_floor)
{
    const std::size_t d = e.dim();
    const double harmonic = e[d - 1] > 0 ? e[d] / e[d - 1] : 0.0;
    if (!(harmonic >= pos_floor))
        throw Error(ErrorCode::SingularSpectrum,
                    "smallest eigenvalue below pos_floor (harmonic estimate " + std::to_string(harmonic) + ")");
}

/// det(t + rho) for t <= 1.
double det_shifted(const ElemSym& e, double t)
{
    double acc = e[0];
    for (std::size_t j = 1; j < e.size(); ++j)
        acc = acc * t + e[j];
    return acc;
}

/// sum_{j>=first} e_j s^j. With first = 1 and s = 1/t this is det(t + rho) / t^d - 1.
double tail_excess(const ElemSym& e, double s, std::size_t first = 1)
{
    const std::size_t d = e.dim();
    double acc = e[d];
    for (std::size_t j = d - 1; j >= first; --j)
        acc = acc * s + e[j];
    for (std::size_t j = 0; j < first; ++j)
        acc *= s;
    return acc;
}

/// z - log(1 + z) for z >= 0, without cancellation for small z.
double z_minus_log1p(double z)
{
    if (z >= 0.25)
        return z - std::log1p(z);
    double term = z, acc = 0;
    for (int n = 2; n < 40; ++n) {
        term *= -z;
        acc -= term / n;
    }
    return acc;
}

/// log(1 + s) - s / (1 + s) for s >= 0, i.e. sum_{n>=2} y^n / n with y = s / (1 + s).
double log1p_minus_ratio(double s)
{
    const double y = s / (1 + s);
    if (y >= 0.25)
        return std::log1p(s) - y;
    double term = y, acc = 0;
    for (int n = 2; n < 40; ++n) {
        term *= y;
        acc += term / n;
    }
    return acc;
}

} // namespace

double neg_xlogx_integral(double x, double abs_tol)
{
    if (!(x >= 0))
        throw Error(ErrorCode::InvalidInvariants, "x must be non-negative");
    auto integrand = [x](double t) {
        if (t <= 1)
            return std::log(t + 1) - std::log(t + x) - (1 - x) / (t + 1);
        // log1p(a / (1 + xs)) - a / (1 + s) with a = (1 - x) s, both O(s), cancelled by hand.
        const double s = 1 / t;
        const double a = (1 - x) * s;
        const double z = a / (1 + x * s);
        return a * (1 - x) * s / ((1 + x * s) * (1 + s)) - z_minus_log1p(z);
    };
    return 1 - x - integrate_halfline(integrand, abs_tol).value;
}

double von_neumann_integral(const ElemSym& e, double abs_tol)
{
    require_invariants(e);
    const std::size_t d = e.dim();
    const double dd = static_cast<double>(d);

    // For t > 1 the bracket is rewritten in s = 1/t. With e_1 = 1 it equals
    // (d-1) [log1p(s) - s/(1+s)] - log1p(sum_{j>=2} e_j s^j / (1+s)),
    // a sum of two O(s^2) terms that do not cancel since e_2 < (d-1)/2.
    auto integrand = [&e, dd](double t) {
        if (t <= 1)
            return dd * std::log1p(t) - std::log(det_shifted(e, t)) - (dd - 1) / (t + 1);
        const double s = 1 / t;
        const double higher = tail_excess(e, s, 2) + (e[1] - 1) * s;
        return (dd - 1) * log1p_minus_ratio(s) - std::log1p(higher / (1 + s));
    };
    return dd - 1 - integrate_halfline(integrand, abs_tol).value;
}

std::vector<double> dS_de(const ElemSym& e, double abs_tol, double pos_floor)
{
    require_invariants(e);
    require_positive_spectrum(e, pos_floor);
    const std::size_t d = e.dim();
    const QuadOptions options{abs_tol, defaults::derivative_rel_tol, 2000};

    std::vector<double> out;
    out.reserve(d - 1);
    for (std::size_t k = 2; k <= d; ++k) {
        auto integrand = [&e, d, k](double t) {
            if (t <= 1) {
                double num = 1;
                for (std::size_t i = 0; i < d - k; ++i)
                    num *= t;
                return num / det_shifted(e, t);
            }
            // t^{d-k} / det(t+rho) = s^k / sum_j e_j s^j
            const double s = 1 / t;
            double num = 1;
            for (std::size_t i = 0; i < k; ++i)
                num *= s;
            return num / (1 + tail_excess(e, s));
        };
        out.push_back(integrate_halfline(integrand, options).value);
    }
    return out;
}

std::vector<double> push_e_to_r(const ElemSym& e, const std::vector<double>& de)
{
    const std::size_t d = e.dim();
    if (de.size() != d - 1)
        throw Error(ErrorCode::LengthMismatch, "dS/de must have d-1 components");
    std::vector<double> dr(d - 1, 0.0);
    for (std::size_t q = 2; q <= d; ++q) {
        double acc = 0;
        for (std::size_t k = q; k <= d; ++k)
            acc += de[k - 2] * e[k - q];
        acc /= static_cast<double>(q);
        dr[q - 2] = (q % 2 == 1) ? acc : -acc;
    }
    return dr;
}

std::vector<double> push_r_to_renyi(const ElemSym& e, const std::vector<double>& dr)
{
    const std::size_t d = e.dim();
    if (dr.size() != d - 1)
        throw Error(ErrorCode::LengthMismatch, "dS/dr must have d-1 components");
    const auto r = power_from_elem(e);
    std::vector<double> dsq(d - 1, 0.0);
    for (std::size_t q = 2; q <= d; ++q)
        dsq[q - 2] = -static_cast<double>(q - 1) * r[q] * dr[q - 2];
    return dsq;
}

EntropyGradient entropy_gradient(const ElemSym& e, double abs_tol, double pos_floor)
{
    EntropyGradient g;
    g.dim = e.dim();
    g.dS_de = dS_de(e, abs_tol, pos_floor);
    g.dS_dr = push_e_to_r(e, g.dS_de);
    g.dS_dSq = push_r_to_renyi(e, g.dS_dr);
    return g;
}

std::vector<double> dS_dr(const ElemSym& e, double abs_tol, double pos_floor)
{
    return push_e_to_r(e, dS_de(e, abs_tol, pos_floor));
}

std::vector<double> dS_dSq(const ElemSym& e, double abs_tol, double pos_floor)
{
    return entropy_gradient(e, abs_tol, pos_floor).dS_dSq;
}

} // namespace renyi
