#pragma once

// Randomized certification sweeps over uniformly sampled spectra.
//
// Sample i of dimension d draws from std::mt19937_64 seeded with
// substream_key(seed, d, i), so every sample can be regenerated on its own
// and the report does not depend on how samples are scheduled.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "renyi/symcore.hpp"

namespace renyi::harness {

enum class Check {
    Roundtrip,
    NewtonIdentity,
    JacobianFd,
    IntegralVsDirect,
    SignDSdSq,
    SignDSde,
    SignDrDe,
    Reconstruction,
};

inline constexpr std::array<Check, 8> all_checks = {
    Check::Roundtrip, Check::NewtonIdentity, Check::JacobianFd, Check::IntegralVsDirect,
    Check::SignDSdSq, Check::SignDSde,       Check::SignDrDe,   Check::Reconstruction,
};

[[nodiscard]] std::string_view to_string(Check check) noexcept;
/// Throws ConfigError for unknown names.
[[nodiscard]] Check parse_check(std::string_view name);

using Tolerances = std::map<std::string, double>;

/// Names and defaults of every tolerance a sweep reads. A SweepConfig may
/// override any of them; unknown names are rejected.
[[nodiscard]] const Tolerances& default_tolerances();

struct SweepConfig {
    std::vector<std::size_t> dims{2, 3, 4, 5, 6, 7, 8};
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    Tolerances tolerances = default_tolerances();
    std::vector<Check> checks{all_checks.begin(), all_checks.end()};
    /// 0 means: RENYI_SPECTRUM_THREADS if set, else 1. Not part of the report.
    unsigned threads = 0;
    /// Adds per-check wall time to the report (which then stops being reproducible).
    bool timing = false;

    [[nodiscard]] double tol(const std::string& name) const;
};

/// Throws ConfigError if the configuration is unusable.
void validate(const SweepConfig& config);

/// Thread count for a sweep: config.threads, else RENYI_SPECTRUM_THREADS, else 1.
[[nodiscard]] unsigned resolve_threads(const SweepConfig& config);

/// SplitMix64 finalizer, chained over (seed, dim, index).
[[nodiscard]] std::uint64_t substream_key(std::uint64_t seed, std::uint64_t dim, std::uint64_t index) noexcept;

/// Uniform point on the probability simplex: d standard exponentials
/// (-log of a 53-bit uniform in (0, 1)), normalized and sorted.
[[nodiscard]] Spectrum sample_spectrum(std::size_t d, std::mt19937_64& rng);

/// The spectrum used as sample `index` of dimension `dim`.
[[nodiscard]] Spectrum sample_for(std::uint64_t seed, std::size_t dim, std::uint64_t index);

enum class SampleStatus { Passed, Failed, Skipped, Errored };

struct SampleOutcome {
    SampleStatus status = SampleStatus::Skipped;
    /// Signed distance to the asserted bound; negative means violated.
    double margin = 0;
    std::string message;
};

/// Runs one check on one spectrum. Pure: the sweep calls exactly this, so
/// any reported margin can be replayed from the spectrum alone.
[[nodiscard]] SampleOutcome evaluate(Check check, const Spectrum& s, const SweepConfig& config);

struct CheckReport {
    Check check = Check::Roundtrip;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    std::size_t errors = 0;
    std::optional<double> worst_margin;
    std::vector<double> worst_spectrum;
    std::size_t worst_dim = 0;
    std::size_t worst_sample = 0;
    /// First error message seen, if any.
    std::string first_error;
    double wall_time_s = 0;

    [[nodiscard]] bool pass() const noexcept { return failed == 0 && errors == 0; }
};

struct VerificationReport {
    SweepConfig config;
    std::vector<CheckReport> checks;
    bool pass = false;
};

[[nodiscard]] VerificationReport run_sweep(const SweepConfig& config);

} // namespace renyi::harness
