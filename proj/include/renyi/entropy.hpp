#pragma once

// Renyi and von Neumann entropies (natural log) and the derivatives of the
// von Neumann entropy in the e-, r- and S_q-charts.

#include <cstddef>
#include <string>
#include <vector>

#include "renyi/error.hpp"
#include "renyi/scalar.hpp"
#include "renyi/symcore.hpp"

namespace renyi {

namespace defaults {
inline constexpr double pos_floor = 1e-9;
inline constexpr double quad_abs_tol = 1e-10;
/// Relative accuracy requested for derivative integrals, which grow like
/// 1/(product of the small eigenvalues) and defeat a purely absolute target.
inline constexpr double derivative_rel_tol = 1e-12;
} // namespace defaults

/// (S_2, ..., S_d) for a d-dimensional spectrum.
template <typename Real>
class BasicRenyiVector {
public:
    BasicRenyiVector(std::size_t dim, std::vector<Real> values) : dim_(dim), values_(std::move(values))
    {
        if (dim_ < 2 || values_.size() != dim_ - 1)
            throw Error(ErrorCode::LengthMismatch,
                        "a Renyi vector of dimension " + std::to_string(dim_) + " holds d-1 orders");
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<Real>& values() const noexcept { return values_; }
    /// S_q for q = 2..d.
    [[nodiscard]] Real at(std::size_t q) const { return values_.at(q - 2); }

    template <typename To>
    [[nodiscard]] BasicRenyiVector<To> cast() const
    {
        std::vector<To> out;
        out.reserve(values_.size());
        for (Real v : values_)
            out.push_back(static_cast<To>(v));
        return BasicRenyiVector<To>(dim_, std::move(out));
    }

private:
    std::size_t dim_;
    std::vector<Real> values_;
};

using RenyiVector = BasicRenyiVector<double>;

template <typename Real>
[[nodiscard]] Real renyi_entropy(const BasicSpectrum<Real>& s, std::size_t q)
{
    if (q < 2 || q > s.dim())
        throw Error(ErrorCode::OrderOutOfRange,
                    "order " + std::to_string(q) + " outside 2.." + std::to_string(s.dim()));
    Real r_q = 0;
    for (Real lambda : s.values()) {
        Real p = 1;
        for (std::size_t i = 0; i < q; ++i)
            p *= lambda;
        r_q += p;
    }
    // + 0 turns -0 into +0 for pure states
    return -math::log(r_q) / static_cast<Real>(q - 1) + Real(0);
}

template <typename Real>
[[nodiscard]] BasicRenyiVector<Real> renyi_vector(const BasicSpectrum<Real>& s)
{
    const auto r = power_sums(s);
    std::vector<Real> values;
    values.reserve(s.dim() - 1);
    for (std::size_t q = 2; q <= s.dim(); ++q)
        values.push_back(-math::log(r[q]) / static_cast<Real>(q - 1) + Real(0));
    return BasicRenyiVector<Real>(s.dim(), std::move(values));
}

/// -sum_j lambda_j log lambda_j with 0 log 0 = 0.
template <typename Real>
[[nodiscard]] Real von_neumann_direct(const BasicSpectrum<Real>& s)
{
    Real acc = 0;
    for (Real lambda : s.values())
        if (lambda > Real(0))
            acc -= lambda * math::log(lambda);
    return acc + Real(0);
}

/// -x log x through its integral representation
///   1 - x - int_0^inf { log(t+1) - log(t+x) - (1-x)/(t+1) } dt,  x >= 0.
[[nodiscard]] double neg_xlogx_integral(double x, double abs_tol = defaults::quad_abs_tol);

/// von Neumann entropy from the elementary invariants alone:
///   S = d - 1 - int_0^inf { d log(t+1) - log det(t+rho) - (d-1)/(t+1) } dt,
/// with det(t+rho) = sum_j t^{d-j} e_j.
/// Throws InvalidInvariants if some e_k < -norm_tol.
[[nodiscard]] double von_neumann_integral(const ElemSym& e, double abs_tol = defaults::quad_abs_tol);

/// dS/de_k = int_0^inf t^{d-k} / det(t+rho) dt for k = 2..d (element k-2).
///
/// The spectrum is screened through its harmonic mean: e_d / e_{d-1} =
/// 1 / sum_j (1/lambda_j) lies in [lambda_min / d, lambda_min], and a value
/// below pos_floor raises SingularSpectrum.
[[nodiscard]] std::vector<double> dS_de(const ElemSym& e, double abs_tol = defaults::quad_abs_tol,
                                        double pos_floor = defaults::pos_floor);

/// dS/dr_q for q = 2..d (element q-2), pushed from the e-chart.
[[nodiscard]] std::vector<double> dS_dr(const ElemSym& e, double abs_tol = defaults::quad_abs_tol,
                                        double pos_floor = defaults::pos_floor);

/// dS/dS_q for q = 2..d (element q-2), pushed from the r-chart with
/// dr_q/dS_q = -(q-1) r_q.
[[nodiscard]] std::vector<double> dS_dSq(const ElemSym& e, double abs_tol = defaults::quad_abs_tol,
                                         double pos_floor = defaults::pos_floor);

/// All three derivative charts from a single set of integrals.
struct EntropyGradient {
    std::size_t dim = 0;
    std::vector<double> dS_de;  ///< k = 2..d
    std::vector<double> dS_dr;  ///< q = 2..d
    std::vector<double> dS_dSq; ///< q = 2..d

    [[nodiscard]] double de(std::size_t k) const { return dS_de.at(k - 2); }
    [[nodiscard]] double dr(std::size_t q) const { return dS_dr.at(q - 2); }
    [[nodiscard]] double dSq(std::size_t q) const { return dS_dSq.at(q - 2); }
};

[[nodiscard]] EntropyGradient entropy_gradient(const ElemSym& e, double abs_tol = defaults::quad_abs_tol,
                                               double pos_floor = defaults::pos_floor);

/// Chain rule from dS/de_k to dS/dr_q; exposed for callers that already
/// hold the e-chart derivatives.
[[nodiscard]] std::vector<double> push_e_to_r(const ElemSym& e, const std::vector<double>& de);

/// Chain rule from dS/dr_q to dS/dS_q.
[[nodiscard]] std::vector<double> push_r_to_renyi(const ElemSym& e, const std::vector<double>& dr);

} // namespace renyi
