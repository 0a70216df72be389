#pragma once

#include <functional>

namespace renyi {

struct QuadResult {
    double value = 0;
    double abs_error_estimate = 0;
    int subdivisions = 0; ///< panels in the final partition
};

struct QuadOptions {
    double abs_tol = 1e-10;
    /// Accept once the error estimate is below max(abs_tol, rel_tol * |value|).
    double rel_tol = 0;
    int max_subdivisions = 2000;
};

/// Integrates f over [0, inf) after the substitution t = u / (1 - u).
///
/// Each panel of [0, 1) is evaluated with the 7/15-point Gauss-Kronrod pair;
/// the panel with the largest error estimate is bisected until the summed
/// estimate meets the tolerance. Only interior nodes are evaluated, so
/// neither t = 0 nor t = inf is ever passed to f.
///
/// Throws InvalidTolerance for non-positive tolerances and NoConvergence
/// when max_subdivisions panels do not suffice.
[[nodiscard]] QuadResult integrate_halfline(const std::function<double(double)>& f, const QuadOptions& options);

[[nodiscard]] QuadResult integrate_halfline(const std::function<double(double)>& f, double abs_tol = 1e-10,
                                            int max_subdivisions = 2000);

} // namespace renyi
