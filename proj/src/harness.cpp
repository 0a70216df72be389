#include "renyi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "renyi/entropy.hpp"
#include "renyi/error.hpp"
#include "renyi/reconstruct.hpp"

namespace renyi::harness {

namespace {

constexpr std::array<std::string_view, 8> check_names = {
    "roundtrip", "newton_identity", "jacobian_fd", "integral_vs_direct",
    "sign_dSdSq", "sign_dSde", "sign_dr_de", "reconstruction",
};

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SampleOutcome judge(double margin, std::string message = {})
{
    return {margin >= 0 ? SampleStatus::Passed : SampleStatus::Failed, margin, std::move(message)};
}

/// Per-sample evaluation with intermediate results shared between checks.
class SampleEvaluator {
public:
    SampleEvaluator(const Spectrum& s, const SweepConfig& config) : s_(s), config_(config) {}

    SampleOutcome run(Check check)
    {
        try {
            switch (check) {
            case Check::Roundtrip: return roundtrip();
            case Check::NewtonIdentity: return newton_identity();
            case Check::JacobianFd: return jacobian_fd();
            case Check::IntegralVsDirect: return integral_vs_direct();
            case Check::SignDSdSq: return sign_dSdSq();
            case Check::SignDSde: return sign_dSde();
            case Check::SignDrDe: return sign_dr_de();
            case Check::Reconstruction: return reconstruction();
            }
        } catch (const Error& err) {
            if (err.code() == ErrorCode::SingularSpectrum)
                return {SampleStatus::Skipped, 0, err.what()};
            return {SampleStatus::Errored, 0, err.what()};
        }
        return {SampleStatus::Errored, 0, "unknown check"};
    }

private:
    const ElemSym& elem()
    {
        if (!elem_)
            elem_ = elem_sym_direct(s_);
        return *elem_;
    }

    const EntropyGradient& gradient()
    {
        if (!gradient_)
            gradient_ = entropy_gradient(elem(), config_.tol("quad_abs_tol"), config_.tol("pos_floor"));
        return *gradient_;
    }

    bool singular() const { return s_.min() < config_.tol("pos_floor"); }

    SampleOutcome roundtrip()
    {
        const auto sq = s_.cast<quad>().renormalized();
        const auto back = spectrum_from_elem(elem_from_power(power_sums(sq)));
        quad worst = 0;
        for (std::size_t j = 0; j < s_.dim(); ++j)
            worst = std::max(worst, fabsq(back[j] - sq[j]));
        const double tol = s_.dim() <= 12 ? config_.tol("roundtrip") : config_.tol("roundtrip_high_dim");
        return judge(tol - static_cast<double>(worst));
    }

    SampleOutcome newton_identity()
    {
        const double residual = newton_residual(elem(), power_sums(s_));
        return judge(config_.tol("newton_identity") - std::fabs(residual));
    }

    SampleOutcome jacobian_fd()
    {
        const std::size_t d = s_.dim();
        const quad h = config_.tol("jacobian_fd_step");
        const auto r = power_sums(s_.cast<quad>());
        const auto e = elem_from_power(r);
        const auto analytic = jacobian_e_wrt_r(e);
        quad worst = 0;
        for (std::size_t l = 2; l <= d; ++l) {
            auto up = r;
            auto down = r;
            up[l] += h;
            down[l] -= h;
            const auto e_up = elem_from_power(up);
            const auto e_down = elem_from_power(down);
            for (std::size_t k = 2; k <= d; ++k) {
                const quad fd = (e_up[k] - e_down[k]) / (2 * h);
                const quad exact = analytic(k, l);
                const quad err = exact == 0 ? fabsq(fd) : fabsq(fd - exact) / fabsq(exact);
                worst = std::max(worst, err);
            }
        }
        return judge(config_.tol("jacobian_fd") - static_cast<double>(worst));
    }

    SampleOutcome integral_vs_direct()
    {
        if (s_.min() < config_.tol("integral_lambda_min"))
            return {SampleStatus::Skipped, 0, "lambda_min below integral_lambda_min"};
        const double integral = von_neumann_integral(elem(), config_.tol("quad_abs_tol"));
        return judge(config_.tol("integral_vs_direct") - std::fabs(integral - von_neumann_direct(s_)));
    }

    SampleOutcome sign_dSde()
    {
        if (singular())
            return {SampleStatus::Skipped, 0, "lambda_min below pos_floor"};
        const auto& g = gradient();
        const double lowest = *std::min_element(g.dS_de.begin(), g.dS_de.end());
        return judge(lowest + config_.tol("sign"));
    }

    SampleOutcome sign_dSdSq()
    {
        if (singular())
            return {SampleStatus::Skipped, 0, "lambda_min below pos_floor"};
        const auto& g = gradient();
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t q = 2; q <= g.dim; ++q)
            margin = std::min(margin, q % 2 == 0 ? g.dSq(q) : -g.dSq(q));
        return judge(margin + config_.tol("sign"));
    }

    SampleOutcome sign_dr_de()
    {
        const auto jac = jacobian_r_wrt_e(elem());
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t l = 2; l <= s_.dim(); ++l)
            for (std::size_t k = l; k <= s_.dim(); ++k)
                margin = std::min(margin, l % 2 == 0 ? -jac(k, l) : jac(k, l));
        return judge(margin + config_.tol("sign_dr_de"));
    }

    SampleOutcome reconstruction()
    {
        const auto sq = s_.cast<quad>().renormalized();
        const auto result = reconstruct_spectrum(renyi_vector(sq));
        quad worst = fabsq(result.von_neumann - von_neumann_direct(sq));
        for (std::size_t j = 0; j < s_.dim(); ++j)
            worst = std::max(worst, fabsq(result.spectrum[j] - sq[j]));
        std::string message = result.feasible ? "" : "flagged infeasible by residual";
        const double margin = config_.tol("reconstruction") - static_cast<double>(worst);
        if (!result.feasible)
            return {SampleStatus::Failed, std::min(margin, 0.0), message};
        return judge(margin);
    }

    const Spectrum& s_;
    const SweepConfig& config_;
    std::optional<ElemSym> elem_;
    std::optional<EntropyGradient> gradient_;
};

struct Task {
    std::size_t dim;
    std::size_t index;
};

struct TaskResult {
    std::vector<double> spectrum;
    std::vector<SampleOutcome> outcomes;
    std::vector<double> seconds;
};

TaskResult run_task(const Task& task, const SweepConfig& config)
{
    const Spectrum s = sample_for(config.seed, task.dim, task.index);
    SampleEvaluator evaluator(s, config);
    TaskResult out;
    out.spectrum.assign(s.values().begin(), s.values().end());
    out.outcomes.reserve(config.checks.size());
    for (Check check : config.checks) {
        const auto start = std::chrono::steady_clock::now();
        out.outcomes.push_back(evaluator.run(check));
        const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - start;
        out.seconds.push_back(config.timing ? spent.count() : 0.0);
    }
    return out;
}

} // namespace

std::string_view to_string(Check check) noexcept
{
    return check_names[static_cast<std::size_t>(check)];
}

Check parse_check(std::string_view name)
{
    for (std::size_t i = 0; i < check_names.size(); ++i)
        if (check_names[i] == name)
            return all_checks[i];
    throw Error(ErrorCode::ConfigError, "unknown check '" + std::string(name) + "'");
}

const Tolerances& default_tolerances()
{
    static const Tolerances defaults_map = {
        {"roundtrip", 1e-8},
        {"roundtrip_high_dim", 1e-6},
        {"newton_identity", 1e-13},
        {"jacobian_fd", 1e-6},
        {"jacobian_fd_step", 1e-6},
        {"integral_vs_direct", 1e-8},
        {"integral_lambda_min", 1e-6},
        {"sign", 1e-10},
        {"sign_dr_de", 1e-12},
        {"reconstruction", 1e-7},
        {"quad_abs_tol", defaults::quad_abs_tol},
        {"pos_floor", defaults::pos_floor},
    };
    return defaults_map;
}

double SweepConfig::tol(const std::string& name) const
{
    if (const auto it = tolerances.find(name); it != tolerances.end())
        return it->second;
    if (const auto it = default_tolerances().find(name); it != default_tolerances().end())
        return it->second;
    throw Error(ErrorCode::ConfigError, "unknown tolerance '" + name + "'");
}

void validate(const SweepConfig& config)
{
    if (config.samples < 1)
        throw Error(ErrorCode::ConfigError, "samples must be at least 1");
    if (config.dims.empty())
        throw Error(ErrorCode::ConfigError, "no dimensions requested");
    for (std::size_t d : config.dims)
        if (d < 2 || d > defaults::d_max)
            throw Error(ErrorCode::ConfigError,
                        "dimension " + std::to_string(d) + " outside [2, " + std::to_string(defaults::d_max) + "]");
    if (config.checks.empty())
        throw Error(ErrorCode::ConfigError, "no checks requested");
    for (const auto& [name, value] : config.tolerances) {
        if (!default_tolerances().contains(name))
            throw Error(ErrorCode::ConfigError, "unknown tolerance '" + name + "'");
        if (!(value > 0) || !std::isfinite(value))
            throw Error(ErrorCode::ConfigError, "tolerance '" + name + "' must be positive");
    }
}

unsigned resolve_threads(const SweepConfig& config)
{
    if (config.threads > 0)
        return config.threads;
    const char* env = std::getenv("RENYI_SPECTRUM_THREADS");
    if (env == nullptr || *env == '\0')
        return 1;
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (*end != '\0' || value < 1 || value > 4096)
        throw Error(ErrorCode::ConfigError, std::string("RENYI_SPECTRUM_THREADS must be an integer >= 1, got '") +
                                                env + "'");
    return static_cast<unsigned>(value);
}

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t dim, std::uint64_t index) noexcept
{
    return splitmix64(splitmix64(splitmix64(seed) ^ dim) ^ index);
}

Spectrum sample_spectrum(std::size_t d, std::mt19937_64& rng)
{
    std::vector<double> draws(d);
    double sum = 0;
    for (double& x : draws) {
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
        x = -std::log(u);
        sum += x;
    }
    for (double& x : draws)
        x /= sum;
    return make_spectrum(draws);
}

Spectrum sample_for(std::uint64_t seed, std::size_t dim, std::uint64_t index)
{
    std::mt19937_64 rng(substream_key(seed, dim, index));
    return sample_spectrum(dim, rng);
}

SampleOutcome evaluate(Check check, const Spectrum& s, const SweepConfig& config)
{
    SampleEvaluator evaluator(s, config);
    return evaluator.run(check);
}

VerificationReport run_sweep(const SweepConfig& config)
{
    validate(config);
    const unsigned threads = resolve_threads(config);

    std::vector<Task> tasks;
    tasks.reserve(config.dims.size() * config.samples);
    for (std::size_t d : config.dims)
        for (std::size_t i = 0; i < config.samples; ++i)
            tasks.push_back({d, i});

    std::vector<TaskResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
            results[i] = run_task(tasks[i], config);
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    // Merge strictly in (dim, sample) order.
    VerificationReport report;
    report.config = config;
    for (std::size_t c = 0; c < config.checks.size(); ++c) {
        CheckReport cr;
        cr.check = config.checks[c];
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const SampleOutcome& o = results[i].outcomes[c];
            cr.wall_time_s += results[i].seconds[c];
            switch (o.status) {
            case SampleStatus::Passed: ++cr.passed; break;
            case SampleStatus::Failed: ++cr.failed; break;
            case SampleStatus::Skipped: ++cr.skipped; continue;
            case SampleStatus::Errored:
                ++cr.errors;
                if (cr.first_error.empty())
                    cr.first_error = o.message;
                continue;
            }
            if (!cr.worst_margin || o.margin < *cr.worst_margin) {
                cr.worst_margin = o.margin;
                cr.worst_spectrum = results[i].spectrum;
                cr.worst_dim = tasks[i].dim;
                cr.worst_sample = tasks[i].index;
            }
        }
        report.checks.push_back(std::move(cr));
    }
    report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckReport& cr) { return cr.pass(); });
    return report;
}

} // namespace renyi::harness
