#include "renyi/symcore.hpp"

#include <complex>

#include <unsupported/Eigen/Polynomials>

namespace renyi::detail {

namespace {

constexpr int max_sweeps = 100;

struct HornerValue {
    ComplexQ value;
    ComplexQ derivative;
    quad rounding_bound; // sum_j |c_j| |z|^{d-j}
};

HornerValue evaluate(std::span<const quad> coeffs, ComplexQ z)
{
    const quad radius = magnitude(z);
    ComplexQ p{coeffs[0], 0};
    ComplexQ dp{0, 0};
    quad bound = fabsq(coeffs[0]);
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        dp = dp * z + p;
        p = p * z + ComplexQ{coeffs[j], 0};
        bound = bound * radius + fabsq(coeffs[j]);
    }
    return {p, dp, bound};
}

} // namespace

std::vector<ComplexQ> polynomial_roots(std::span<const quad> monic_coeffs)
{
    const std::size_t d = monic_coeffs.size() - 1;
    std::vector<ComplexQ> z(d);
    if (d == 0)
        return z;

    Eigen::VectorXd ascending(d + 1);
    for (std::size_t m = 0; m <= d; ++m)
        ascending(static_cast<Eigen::Index>(m)) = static_cast<double>(monic_coeffs[d - m]);
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(ascending);
    const auto& start = solver.roots();
    for (std::size_t i = 0; i < d; ++i) {
        const std::complex<double> root = start(static_cast<Eigen::Index>(i));
        z[i] = {root.real(), root.imag()};
    }

    // Aberth's correction is singular for coincident approximations.
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (z[i].re == z[j].re && z[i].im == z[j].im) {
                const quad nudge = 1e-9 * (1 + magnitude(z[i])) * static_cast<quad>(i + 1);
                z[i].im += nudge;
            }

    const quad noise = 16 * FLT128_EPSILON;
    std::vector<bool> settled(d, false);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool all_settled = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (settled[i])
                continue;
            const HornerValue h = evaluate(monic_coeffs, z[i]);
            if (magnitude(h.value) <= noise * h.rounding_bound) {
                settled[i] = true;
                continue;
            }
            all_settled = false;
            if (h.derivative.re == 0 && h.derivative.im == 0)
                continue;
            const ComplexQ newton = h.value / h.derivative;
            ComplexQ repulsion{0, 0};
            for (std::size_t j = 0; j < d; ++j) {
                if (j == i)
                    continue;
                const ComplexQ gap = z[i] - z[j];
                if (gap.re == 0 && gap.im == 0)
                    continue;
                repulsion = repulsion + ComplexQ{1, 0} / gap;
            }
            const ComplexQ step = newton / (ComplexQ{1, 0} - newton * repulsion);
            z[i] = z[i] - step;
        }
        if (all_settled)
            break;
    }
    return z;
}

quad real_backward_error(std::span<const quad> coeffs, quad x)
{
    const HornerValue h = evaluate(coeffs, {x, 0});
    return h.rounding_bound > 0 ? magnitude(h.value) / h.rounding_bound : 0;
}

} // namespace renyi::detail
