#include "renyi/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "renyi/error.hpp"

namespace renyi {

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the 7 Gauss nodes.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};

constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};

constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double error;
};

struct ByError {
    bool operator()(const Panel& lhs, const Panel& rhs) const
    {
        if (lhs.error != rhs.error)
            return lhs.error < rhs.error;
        return lhs.a > rhs.a; // ties: leftmost first, keeps the order deterministic
    }
};

template <typename F>
Panel gauss_kronrod15(const F& g, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 7> left{};
    std::array<double, 7> right{};
    const double fc = g(centre);
    double gauss = fc * wg[3];
    double kronrod = fc * wgk[7];
    double resabs = std::fabs(kronrod);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        left[j] = g(centre - dx);
        right[j] = g(centre + dx);
        const double sum = left[j] + right[j];
        kronrod += wgk[j] * sum;
        resabs += wgk[j] * (std::fabs(left[j]) + std::fabs(right[j]));
        if (j % 2 == 1)
            gauss += wg[j / 2] * sum;
    }
    const double mean = 0.5 * kronrod;
    double resasc = wgk[7] * std::fabs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::fabs(left[j] - mean) + std::fabs(right[j] - mean));

    const double value = kronrod * half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);
    double error = std::fabs((kronrod - gauss) * half);
    if (resasc != 0 && error != 0)
        error = resasc * std::min(1.0, std::pow(200 * error / resasc, 1.5));
    if (resabs > tiny / (50 * eps))
        error = std::max(50 * eps * resabs, error);
    return {a, b, value, error};
}

template <typename F>
QuadResult adaptive(const F& g, double a, double b, const QuadOptions& options)
{
    if (!(options.abs_tol > 0) || options.rel_tol < 0)
        throw Error(ErrorCode::InvalidTolerance, "abs_tol must be positive and rel_tol non-negative");
    if (options.max_subdivisions < 1)
        throw Error(ErrorCode::InvalidTolerance, "max_subdivisions must be at least 1");

    std::priority_queue<Panel, std::vector<Panel>, ByError> panels;
    const Panel first = gauss_kronrod15(g, a, b);
    panels.push(first);
    double value = first.value;
    double error = first.error;

    auto target = [&](double v) { return std::max(options.abs_tol, options.rel_tol * std::fabs(v)); };

    while (true) {
        if (!std::isfinite(value) || !std::isfinite(error))
            throw Error(ErrorCode::NoConvergence, "integrand produced a non-finite value");
        if (error <= target(value)) {
            // Re-sum from scratch, the running totals accumulate cancellation.
            std::vector<Panel> all;
            all.reserve(panels.size());
            while (!panels.empty()) {
                all.push_back(panels.top());
                panels.pop();
            }
            std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
            double total = 0;
            double total_err = 0;
            for (const Panel& p : all) {
                total += p.value;
                total_err += p.error;
            }
            if (total_err <= target(total))
                return {total, total_err, static_cast<int>(all.size())};
            for (const Panel& p : all)
                panels.push(p);
            value = total;
            error = total_err;
        }
        if (static_cast<int>(panels.size()) >= options.max_subdivisions)
            throw Error(ErrorCode::NoConvergence,
                        "error estimate " + std::to_string(error) + " above tolerance after " +
                            std::to_string(panels.size()) + " panels");

        const Panel worst = panels.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw Error(ErrorCode::NoConvergence, "panel width at machine resolution");
        panels.pop();
        const Panel lo = gauss_kronrod15(g, worst.a, mid);
        const Panel hi = gauss_kronrod15(g, mid, worst.b);
        value += lo.value + hi.value - worst.value;
        error += lo.error + hi.error - worst.error;
        panels.push(lo);
        panels.push(hi);
    }
}

} // namespace

QuadResult integrate_halfline(const std::function<double(double)>& f, const QuadOptions& options)
{
    auto compactified = [&f](double u) {
        const double w = 1.0 - u;
        // A node rounds onto u = 1 only on panels a few ulps wide, whose
        // weight is negligible; t = inf itself is never passed to f.
        if (!(w > 0))
            return 0.0;
        const double t = u / w;
        return f(t) / (w * w);
    };
    return adaptive(compactified, 0.0, 1.0, options);
}

QuadResult integrate_halfline(const std::function<double(double)>& f, double abs_tol, int max_subdivisions)
{
    return integrate_halfline(f, QuadOptions{abs_tol, 0.0, max_subdivisions});
}

} // namespace renyi
