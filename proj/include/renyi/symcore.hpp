#pragma once

// Spectra, power sums and elementary symmetric invariants, with the
// conversions and triangular Jacobians between them.
//
// Every container uses the full index range 0..d: r_0 = d, e_0 = 1.
// All types are templated on the working precision; the aliases at the
// bottom fix it to double.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "renyi/error.hpp"
#include "renyi/scalar.hpp"

namespace renyi {

namespace defaults {
inline constexpr double norm_tol = 1e-10;
inline constexpr double root_tol = 1e-7;
inline constexpr std::size_t d_max = 20;
} // namespace defaults

template <typename Real>
class BasicSpectrum;

template <typename Real>
BasicSpectrum<Real> make_spectrum(std::span<const Real> values,
                                  Real norm_tol = Real(defaults::norm_tol),
                                  std::size_t d_max = defaults::d_max);

/// Probability vector sorted non-increasing, 2 <= d <= d_max.
/// Only make_spectrum (and cast) can produce one.
template <typename Real>
class BasicSpectrum {
public:
    using value_type = Real;

    [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const Real> values() const noexcept { return values_; }
    [[nodiscard]] Real operator[](std::size_t j) const { return values_[j]; }
    [[nodiscard]] Real min() const noexcept { return values_.back(); }
    [[nodiscard]] Real max() const noexcept { return values_.front(); }

    template <typename To>
    [[nodiscard]] BasicSpectrum<To> cast() const
    {
        std::vector<To> out(values_.size());
        std::transform(values_.begin(), values_.end(), out.begin(),
                       [](Real v) { return static_cast<To>(v); });
        return BasicSpectrum<To>(std::move(out));
    }

    /// Entries divided by their sum in this precision. A spectrum widened
    /// from double still carries the double rounding of its sum, and for
    /// clustered entries that offset alone moves the inverse map by far
    /// more than one ulp.
    [[nodiscard]] BasicSpectrum renormalized() const
    {
        Real sum = 0;
        for (Real v : values_)
            sum += v;
        std::vector<Real> out(values_);
        for (Real& v : out)
            v /= sum;
        return BasicSpectrum(std::move(out));
    }

    friend bool operator==(const BasicSpectrum& a, const BasicSpectrum& b)
    {
        return a.values_ == b.values_;
    }

private:
    explicit BasicSpectrum(std::vector<Real> values) : values_(std::move(values)) {}

    std::vector<Real> values_;

    template <typename>
    friend class BasicSpectrum;
    friend BasicSpectrum make_spectrum<Real>(std::span<const Real>, Real, std::size_t);
};

template <typename Real>
BasicSpectrum<Real> make_spectrum(std::span<const Real> values, Real norm_tol, std::size_t d_max)
{
    const std::size_t d = values.size();
    if (d < 2)
        throw Error(ErrorCode::DimensionTooSmall, "spectrum needs at least 2 entries, got " + std::to_string(d));
    if (d > d_max)
        throw Error(ErrorCode::DimensionTooLarge,
                    "dimension " + std::to_string(d) + " exceeds d_max = " + std::to_string(d_max));
    Real sum = 0;
    for (Real v : values) {
        if (!math::isfinite(v))
            throw Error(ErrorCode::NonFinite, "spectrum entry is not finite");
        if (v < -norm_tol)
            throw Error(ErrorCode::NegativeEntry, "spectrum entry " + std::to_string(static_cast<double>(v)));
        sum += v;
    }
    if (math::abs(sum - Real(1)) > norm_tol)
        throw Error(ErrorCode::NotNormalized, "entries sum to " + std::to_string(static_cast<double>(sum)));

    std::vector<Real> out(values.begin(), values.end());
    Real clamped_sum = 0;
    for (Real& v : out) {
        v = std::max(v, Real(0));
        clamped_sum += v;
    }
    for (Real& v : out)
        v /= clamped_sum;
    std::sort(out.begin(), out.end(), std::greater<Real>());
    return BasicSpectrum<Real>(std::move(out));
}

template <typename Real>
BasicSpectrum<Real> make_spectrum(const std::vector<Real>& values,
                                  Real norm_tol = Real(defaults::norm_tol),
                                  std::size_t d_max = defaults::d_max)
{
    return make_spectrum<Real>(std::span<const Real>(values), norm_tol, d_max);
}

namespace detail {

/// Dense coefficient table indexed 0..d.
template <typename Real>
class IndexedSequence {
public:
    IndexedSequence() = default;
    explicit IndexedSequence(std::vector<Real> values) : values_(std::move(values)) {}

    /// d, i.e. one less than the number of stored entries.
    [[nodiscard]] std::size_t dim() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const Real> values() const noexcept { return values_; }
    [[nodiscard]] Real operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] Real& operator[](std::size_t i) { return values_[i]; }

private:
    std::vector<Real> values_;
};

} // namespace detail

/// (r_0, ..., r_d) with r_0 = d.
template <typename Real>
class BasicPowerSums : public detail::IndexedSequence<Real> {
    using detail::IndexedSequence<Real>::IndexedSequence;
};

/// (e_0, ..., e_d) with e_0 = 1.
template <typename Real>
class BasicElemSym : public detail::IndexedSequence<Real> {
    using detail::IndexedSequence<Real>::IndexedSequence;
};

template <typename Real>
[[nodiscard]] BasicPowerSums<Real> power_sums(const BasicSpectrum<Real>& s)
{
    const std::size_t d = s.dim();
    std::vector<Real> r(d + 1, Real(0));
    std::vector<Real> powers(s.values().begin(), s.values().end());
    r[0] = static_cast<Real>(d);
    for (std::size_t q = 1; q <= d; ++q) {
        Real acc = 0;
        for (std::size_t j = 0; j < d; ++j) {
            acc += powers[j];
            powers[j] *= s[j];
        }
        r[q] = acc;
    }
    return BasicPowerSums<Real>(std::move(r));
}

/// Coefficients of prod_j (x + lambda_j), one root at a time.
template <typename Real>
[[nodiscard]] BasicElemSym<Real> elem_sym_direct(const BasicSpectrum<Real>& s)
{
    const std::size_t d = s.dim();
    std::vector<Real> e(d + 1, Real(0));
    e[0] = Real(1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = i + 1; k >= 1; --k)
            e[k] += s[i] * e[k - 1];
    return BasicElemSym<Real>(std::move(e));
}

namespace detail {

template <typename Real>
void require_power_layout(const BasicPowerSums<Real>& r)
{
    if (r.size() < 2 || r[0] != static_cast<Real>(r.size() - 1))
        throw Error(ErrorCode::LengthMismatch,
                    "power sums must carry r_0 = d followed by d entries (got " + std::to_string(r.size()) +
                        " entries)");
}

template <typename Real>
void require_elem_layout(const BasicElemSym<Real>& e)
{
    if (e.size() < 2)
        throw Error(ErrorCode::LengthMismatch, "elementary invariants need at least e_0, e_1");
}

} // namespace detail

/// Newton's recursion k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} r_i.
/// No sign constraint is imposed on the result.
template <typename Real>
[[nodiscard]] BasicElemSym<Real> elem_from_power(const BasicPowerSums<Real>& r)
{
    detail::require_power_layout(r);
    const std::size_t d = r.dim();
    std::vector<Real> e(d + 1, Real(0));
    e[0] = Real(1);
    e[1] = r[1];
    for (std::size_t k = 2; k <= d; ++k) {
        Real acc = 0;
        for (std::size_t i = 1; i <= k; ++i) {
            const Real term = e[k - i] * r[i];
            acc += (i % 2 == 1) ? term : -term;
        }
        e[k] = acc / static_cast<Real>(k);
    }
    return BasicElemSym<Real>(std::move(e));
}

/// r_k = (-1)^{k-1} k e_k + sum_{i=1..k-1} (-1)^{i-1} e_i r_{k-i}.
template <typename Real>
[[nodiscard]] BasicPowerSums<Real> power_from_elem(const BasicElemSym<Real>& e)
{
    detail::require_elem_layout(e);
    const std::size_t d = e.dim();
    std::vector<Real> r(d + 1, Real(0));
    r[0] = static_cast<Real>(d);
    r[1] = e[1];
    for (std::size_t k = 2; k <= d; ++k) {
        const Real lead = static_cast<Real>(k) * e[k];
        Real acc = (k % 2 == 1) ? lead : -lead;
        for (std::size_t i = 1; i < k; ++i) {
            const Real term = e[i] * r[k - i];
            acc += (i % 2 == 1) ? term : -term;
        }
        r[k] = acc;
    }
    return BasicPowerSums<Real>(std::move(r));
}

/// sum_{k=0..d} (-1)^k r_k e_{d-k}; vanishes for a consistent pair.
template <typename Real>
[[nodiscard]] Real newton_residual(const BasicElemSym<Real>& e, const BasicPowerSums<Real>& r)
{
    if (e.size() != r.size() || e.size() < 2)
        throw Error(ErrorCode::LengthMismatch, "e and r must both have d+1 entries");
    const std::size_t d = e.dim();
    Real acc = 0;
    for (std::size_t k = 0; k <= d; ++k) {
        const Real term = r[k] * e[d - k];
        acc += (k % 2 == 0) ? term : -term;
    }
    return acc;
}

namespace detail {

struct ComplexQ {
    quad re = 0;
    quad im = 0;
};

inline ComplexQ operator+(ComplexQ a, ComplexQ b) { return {a.re + b.re, a.im + b.im}; }
inline ComplexQ operator-(ComplexQ a, ComplexQ b) { return {a.re - b.re, a.im - b.im}; }
inline ComplexQ operator*(ComplexQ a, ComplexQ b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexQ operator/(ComplexQ a, ComplexQ b)
{
    // Smith's algorithm
    if (fabsq(b.re) >= fabsq(b.im)) {
        const quad ratio = b.im / b.re;
        const quad den = b.re + b.im * ratio;
        return {(a.re + a.im * ratio) / den, (a.im - a.re * ratio) / den};
    }
    const quad ratio = b.re / b.im;
    const quad den = b.re * ratio + b.im;
    return {(a.re * ratio + a.im) / den, (a.im * ratio - a.re) / den};
}
inline quad magnitude(ComplexQ a) { return hypotq(a.re, a.im); }

/// Roots of the monic polynomial t^d + c_1 t^{d-1} + ... + c_d.
///
/// Starting values are the eigenvalues of the balanced companion matrix in
/// double precision; they are then refined in binary128 by Aberth-Ehrlich
/// sweeps (Newton steps with mutual repulsion), which keep neighbouring
/// approximations of a clustered root from collapsing onto one another.
std::vector<ComplexQ> polynomial_roots(std::span<const quad> monic_coeffs);

/// |P(x)| / sum_j |c_j| |x|^{d-j}: the smallest relative coefficient
/// perturbation that makes the real point x an exact root.
quad real_backward_error(std::span<const quad> coeffs, quad x);

} // namespace detail

/// Negated roots of det(t + rho) = sum_j t^{d-j} e_j, i.e. the spectrum
/// with the given invariants.
template <typename Real>
[[nodiscard]] BasicSpectrum<Real> spectrum_from_elem(const BasicElemSym<Real>& e,
                                                     Real root_tol = Real(defaults::root_tol),
                                                     std::size_t d_max = defaults::d_max)
{
    detail::require_elem_layout(e);
    const std::size_t d = e.dim();
    if (d < 2)
        throw Error(ErrorCode::DimensionTooSmall, "need d >= 2");
    if (d > d_max)
        throw Error(ErrorCode::DimensionTooLarge, "dimension " + std::to_string(d) + " exceeds d_max");
    if (e[0] != Real(1))
        throw Error(ErrorCode::InvalidInvariants, "e_0 must be 1");

    std::vector<quad> coeffs(d + 1);
    for (std::size_t j = 0; j <= d; ++j) {
        if (!math::isfinite(e[j]))
            throw Error(ErrorCode::NonFinite, "non-finite invariant e_" + std::to_string(j));
        coeffs[j] = static_cast<quad>(e[j]);
    }
    const auto roots = detail::polynomial_roots(coeffs);

    // A root of multiplicity m is only resolved to about eps^(1/m) and may
    // come back with a sizeable imaginary part. It still counts as real when
    // its real part is a root of the polynomial up to input rounding.
    const quad admissible = 64 * static_cast<quad>(math::epsilon<Real>());
    std::vector<Real> lambda(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (fabsq(roots[j].im) > static_cast<quad>(root_tol) &&
            detail::real_backward_error(coeffs, roots[j].re) > admissible)
            throw Error(ErrorCode::ComplexRoots,
                        "root with imaginary part " + std::to_string(static_cast<double>(roots[j].im)));
        const Real value = static_cast<Real>(-roots[j].re);
        if (value < -root_tol)
            throw Error(ErrorCode::NegativeRoot, "negated root " + std::to_string(static_cast<double>(value)));
        lambda[j] = std::max(value, Real(0));
    }
    Real sum = 0;
    for (Real v : lambda)
        sum += v;
    if (!(sum > Real(0)))
        throw Error(ErrorCode::InvalidInvariants, "recovered entries sum to zero");
    for (Real& v : lambda)
        v /= sum;
    return make_spectrum<Real>(std::span<const Real>(lambda), Real(defaults::norm_tol), d_max);
}

enum class JacobianOrientation {
    EWrtR, ///< rows e_k, columns r_l
    RWrtE, ///< rows r_k, columns e_l
};

/// (d-1)x(d-1) matrix with rows k = 2..d and columns l = 2..d.
template <typename Real>
class BasicJacobianTable {
public:
    BasicJacobianTable(std::size_t dim, JacobianOrientation orientation)
        : dim_(dim), orientation_(orientation), entries_((dim - 1) * (dim - 1), Real(0))
    {
    }

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] JacobianOrientation orientation() const noexcept { return orientation_; }

    /// Entry (k, l) using the natural 2-based indices.
    [[nodiscard]] Real operator()(std::size_t k, std::size_t l) const { return entries_[slot(k, l)]; }
    [[nodiscard]] Real& operator()(std::size_t k, std::size_t l) { return entries_[slot(k, l)]; }

private:
    [[nodiscard]] std::size_t slot(std::size_t k, std::size_t l) const
    {
        return (k - 2) * (dim_ - 1) + (l - 2);
    }

    std::size_t dim_;
    JacobianOrientation orientation_;
    std::vector<Real> entries_;
};

/// de_k/dr_l = (-1)^{l+1} e_{k-l} / l for l <= k, zero above the diagonal.
template <typename Real>
[[nodiscard]] BasicJacobianTable<Real> jacobian_e_wrt_r(const BasicElemSym<Real>& e)
{
    detail::require_elem_layout(e);
    const std::size_t d = e.dim();
    if (d < 2)
        throw Error(ErrorCode::DimensionTooSmall, "need d >= 2");
    BasicJacobianTable<Real> jac(d, JacobianOrientation::EWrtR);
    for (std::size_t k = 2; k <= d; ++k)
        for (std::size_t l = 2; l <= k; ++l) {
            const Real v = e[k - l] / static_cast<Real>(l);
            jac(k, l) = (l % 2 == 1) ? v : -v;
        }
    return jac;
}

/// Inverse of jacobian_e_wrt_r by forward substitution, column by column.
template <typename Real>
[[nodiscard]] BasicJacobianTable<Real> jacobian_r_wrt_e(const BasicElemSym<Real>& e)
{
    const auto lower = jacobian_e_wrt_r(e);
    const std::size_t d = lower.dim();
    BasicJacobianTable<Real> inv(d, JacobianOrientation::RWrtE);
    for (std::size_t col = 2; col <= d; ++col) {
        inv(col, col) = Real(1) / lower(col, col);
        for (std::size_t row = col + 1; row <= d; ++row) {
            Real acc = 0;
            for (std::size_t m = col; m < row; ++m)
                acc += lower(row, m) * inv(m, col);
            inv(row, col) = -acc / lower(row, row);
        }
    }
    return inv;
}

using Spectrum = BasicSpectrum<double>;
using PowerSums = BasicPowerSums<double>;
using ElemSym = BasicElemSym<double>;
using JacobianTable = BasicJacobianTable<double>;

} // namespace renyi
