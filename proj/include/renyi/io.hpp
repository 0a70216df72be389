#pragma once

// Serialization for the CLI: spectrum/entropy documents, sweep
// configurations and verification reports ("schema": "verify-report/1").

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "renyi/entropy.hpp"
#include "renyi/harness.hpp"
#include "renyi/reconstruct.hpp"

namespace renyi::io {

inline constexpr std::string_view report_schema = "verify-report/1";

enum class Format { Json, Csv };

/// "json" or "csv"; anything else is a ConfigError.
[[nodiscard]] Format parse_format(std::string_view name);

/// Comma separated reals, e.g. "0.5,0.3,0.2".
[[nodiscard]] std::vector<double> parse_list(std::string_view text);

/// One value per line; blank lines and lines starting with '#' are ignored.
[[nodiscard]] std::vector<double> parse_csv_values(std::istream& in);

/// "2..8" or "2,3,5" (ranges and single values may be mixed: "2..4,7").
[[nodiscard]] std::vector<std::size_t> parse_dims(std::string_view text);

/// {"dim", "spectrum", "renyi", "von_neumann"}
[[nodiscard]] nlohmann::json entropy_document(const Spectrum& s);
[[nodiscard]] nlohmann::json reconstruction_document(const RenyiVector& input, const ReconstructionResult& result);
[[nodiscard]] nlohmann::json gradient_document(const Spectrum& s, const EntropyGradient& g);

/// Flat CSV rendering of any of the documents above: header
/// "field,index,value"; arrays expand to one row per element (renyi and
/// derivative arrays are indexed from 2, the spectrum from 0).
[[nodiscard]] std::string to_csv(const nlohmann::json& document);

[[nodiscard]] nlohmann::json config_to_json(const harness::SweepConfig& config);
/// Missing fields keep their defaults. Throws ConfigError on bad content.
[[nodiscard]] harness::SweepConfig config_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json report_to_json(const harness::VerificationReport& report);

} // namespace renyi::io
