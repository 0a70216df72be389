#pragma once

// Recovering a spectrum (and its von Neumann entropy) from the first d-1
// integer Renyi entropies: invert the Renyi definition, convert power sums
// to elementary invariants, extract the roots of det(t + rho), then polish
// the roots against the power sums.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "renyi/entropy.hpp"
#include "renyi/error.hpp"
#include "renyi/scalar.hpp"
#include "renyi/symcore.hpp"

namespace renyi {

namespace defaults {
inline constexpr double recon_tol = 1e-7;
/// Inputs this close to log d are treated as the uniform spectrum. A gap
/// of g in S_q corresponds to entries about sqrt(g / d) away from 1/d, so
/// the window shrinks with the working precision.
template <typename Real>
constexpr double uniform_snap();
template <>
constexpr double uniform_snap<double>() { return 1e-9; }
template <>
constexpr double uniform_snap<quad>() { return 1e-24; }
} // namespace defaults

enum class ReconstructionStage {
    InputRange,     ///< S_q negative or above log d
    Invariants,     ///< some recovered e_k is negative
    RootExtraction, ///< complex or negative roots
};

[[nodiscard]] constexpr std::string_view to_string(ReconstructionStage stage) noexcept
{
    switch (stage) {
    case ReconstructionStage::InputRange: return "input_range";
    case ReconstructionStage::Invariants: return "invariants";
    case ReconstructionStage::RootExtraction: return "root_extraction";
    }
    return "unknown";
}

/// Raised with code Infeasible; stage() names the first step that failed and
/// cause() the underlying error (ComplexRoots, EntropyTooLarge, ...).
class InfeasibleError : public Error {
public:
    InfeasibleError(ReconstructionStage stage, ErrorCode cause, const std::string& detail)
        : Error(ErrorCode::Infeasible, std::string(to_string(stage)) + ": " + detail), stage_(stage), cause_(cause)
    {
    }

    [[nodiscard]] ReconstructionStage stage() const noexcept { return stage_; }
    [[nodiscard]] ErrorCode cause() const noexcept { return cause_; }

private:
    ReconstructionStage stage_;
    ErrorCode cause_;
};

template <typename Real>
struct BasicReconstructionResult {
    BasicSpectrum<Real> spectrum;
    Real von_neumann;
    /// max_q |S_q requested - S_q of the recovered spectrum|
    Real residual;
    bool feasible;
};

using ReconstructionResult = BasicReconstructionResult<double>;

/// r_0 = d, r_1 = 1, r_q = exp(-(q-1) S_q).
///
/// Entropies within recon_tol outside [0, log d] are clamped onto the
/// interval; anything further out raises NegativeEntropy / EntropyTooLarge.
template <typename Real>
[[nodiscard]] BasicPowerSums<Real> power_from_renyi(const BasicRenyiVector<Real>& rv,
                                                    Real recon_tol = Real(defaults::recon_tol))
{
    const std::size_t d = rv.dim();
    const Real log_d = math::log(static_cast<Real>(d));
    std::vector<Real> r(d + 1);
    r[0] = static_cast<Real>(d);
    r[1] = Real(1);
    for (std::size_t q = 2; q <= d; ++q) {
        Real s = rv.at(q);
        if (!math::isfinite(s))
            throw Error(ErrorCode::NonFinite, "S_" + std::to_string(q) + " is not finite");
        if (s < -recon_tol)
            throw Error(ErrorCode::NegativeEntropy,
                        "S_" + std::to_string(q) + " = " + std::to_string(static_cast<double>(s)));
        if (s > log_d + recon_tol)
            throw Error(ErrorCode::EntropyTooLarge, "S_" + std::to_string(q) + " = " +
                                                        std::to_string(static_cast<double>(s)) + " exceeds log d");
        s = std::clamp(s, Real(0), log_d);
        r[q] = math::exp(-static_cast<Real>(q - 1) * s);
    }
    return BasicPowerSums<Real>(std::move(r));
}

namespace detail {

/// max_q |sum_j lambda_j^q / r_q - 1| over q = 1..d.
template <typename Real>
Real relative_power_residual(const std::vector<Real>& lambda, const BasicPowerSums<Real>& r,
                             std::vector<Real>* out = nullptr)
{
    const std::size_t d = lambda.size();
    std::vector<Real> power(lambda);
    Real worst = 0;
    for (std::size_t q = 1; q <= d; ++q) {
        Real sum = 0;
        for (std::size_t j = 0; j < d; ++j) {
            sum += power[j];
            power[j] *= lambda[j];
        }
        const Real res = sum / r[q] - Real(1);
        if (out)
            (*out)[q - 1] = res;
        worst = std::max(worst, math::abs(res));
    }
    return worst;
}

/// Newton steps on sum_j lambda_j^q = r_q (q = 1..d), starting from the
/// roots. The Newton recursion loses digits when e_d is tiny; solving
/// against r directly recovers them up to the conditioning of the problem.
/// A step is kept only if it lowers the residual.
template <typename Real>
void refine_against_power_sums(std::vector<Real>& lambda, const BasicPowerSums<Real>& r, int max_steps = 4)
{
    const std::size_t d = lambda.size();
    std::vector<Real> res(d), step(d), candidate(d);
    Real current = relative_power_residual(lambda, r, &res);
    for (int iter = 0; iter < max_steps && current > Real(0); ++iter) {
        // Row q-1: q lambda_j^{q-1} / r_q, augmented with the residual.
        std::vector<std::vector<Real>> a(d, std::vector<Real>(d + 1));
        for (std::size_t j = 0; j < d; ++j) {
            Real power = 1;
            for (std::size_t q = 1; q <= d; ++q) {
                a[q - 1][j] = static_cast<Real>(q) * power / r[q];
                power *= lambda[j];
            }
        }
        for (std::size_t q = 0; q < d; ++q)
            a[q][d] = res[q];
        // Gaussian elimination with partial pivoting.
        bool singular = false;
        for (std::size_t c = 0; c < d && !singular; ++c) {
            std::size_t pivot = c;
            for (std::size_t i = c + 1; i < d; ++i)
                if (math::abs(a[i][c]) > math::abs(a[pivot][c]))
                    pivot = i;
            if (a[pivot][c] == Real(0)) {
                singular = true;
                break;
            }
            std::swap(a[c], a[pivot]);
            for (std::size_t i = c + 1; i < d; ++i) {
                const Real f = a[i][c] / a[c][c];
                for (std::size_t k = c; k <= d; ++k)
                    a[i][k] -= f * a[c][k];
            }
        }
        if (singular)
            return;
        for (std::size_t c = d; c-- > 0;) {
            Real acc = a[c][d];
            for (std::size_t k = c + 1; k < d; ++k)
                acc -= a[c][k] * step[k];
            step[c] = acc / a[c][c];
        }
        for (std::size_t j = 0; j < d; ++j)
            candidate[j] = std::max(lambda[j] - step[j], Real(0));
        std::vector<Real> candidate_res(d);
        const Real next = relative_power_residual(candidate, r, &candidate_res);
        if (!(next < current))
            return;
        lambda.swap(candidate);
        res.swap(candidate_res);
        current = next;
    }
}

} // namespace detail

template <typename Real>
[[nodiscard]] BasicReconstructionResult<Real> reconstruct_spectrum(const BasicRenyiVector<Real>& rv,
                                                                   Real recon_tol = Real(defaults::recon_tol),
                                                                   std::size_t d_max = defaults::d_max)
{
    const std::size_t d = rv.dim();
    if (d > d_max)
        throw Error(ErrorCode::DimensionTooLarge, "dimension " + std::to_string(d) + " exceeds d_max");

    BasicPowerSums<Real> r;
    try {
        r = power_from_renyi(rv, recon_tol);
    } catch (const Error& err) {
        throw InfeasibleError(ReconstructionStage::InputRange, err.code(), err.what());
    }

    const Real log_d = math::log(static_cast<Real>(d));
    bool near_uniform = false;
    for (Real s : rv.values())
        near_uniform = near_uniform || math::abs(s - log_d) <= Real(defaults::uniform_snap<Real>());

    std::vector<Real> lambda;
    if (near_uniform) {
        lambda.assign(d, Real(1) / static_cast<Real>(d));
    } else {
        const auto e = elem_from_power(r);
        for (std::size_t k = 2; k <= d; ++k)
            if (e[k] < -recon_tol)
                throw InfeasibleError(ReconstructionStage::Invariants, ErrorCode::InvalidInvariants,
                                      "e_" + std::to_string(k) + " = " + std::to_string(static_cast<double>(e[k])));
        try {
            const auto s = spectrum_from_elem(e, Real(defaults::root_tol), d_max);
            lambda.assign(s.values().begin(), s.values().end());
        } catch (const Error& err) {
            throw InfeasibleError(ReconstructionStage::RootExtraction, err.code(), err.what());
        }
        detail::refine_against_power_sums(lambda, r);
    }

    auto spectrum = make_spectrum<Real>(std::span<const Real>(lambda), Real(defaults::norm_tol), d_max);
    const auto recomputed = renyi_vector(spectrum);
    Real residual = 0;
    for (std::size_t q = 2; q <= d; ++q)
        residual = std::max(residual, math::abs(recomputed.at(q) - rv.at(q)));
    const Real entropy = von_neumann_direct(spectrum);
    const bool feasible = residual <= recon_tol;
    return {std::move(spectrum), entropy, residual, feasible};
}

} // namespace renyi
