#include "renyi/io.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "renyi/error.hpp"

namespace renyi::io {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view token)
{
    token = trim(token);
    // std::from_chars for double rejects a leading '+'.
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    double value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        throw Error(ErrorCode::ConfigError, "not a number: '" + std::string(token) + "'");
    return value;
}

std::size_t parse_count(std::string_view token)
{
    token = trim(token);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size())
        throw Error(ErrorCode::ConfigError, "not a non-negative integer: '" + std::string(token) + "'");
    return value;
}

std::string render(const json& value)
{
    if (value.is_null())
        return "";
    if (value.is_string())
        return value.get<std::string>();
    return value.dump();
}

} // namespace

Format parse_format(std::string_view name)
{
    if (name == "json")
        return Format::Json;
    if (name == "csv")
        return Format::Csv;
    throw Error(ErrorCode::ConfigError, "unknown format '" + std::string(name) + "'");
}

std::vector<double> parse_list(std::string_view text)
{
    std::vector<double> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(parse_real(text.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::vector<double> parse_csv_values(std::istream& in)
{
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto content = trim(line);
        if (content.empty() || content.front() == '#')
            continue;
        out.push_back(parse_real(content));
    }
    return out;
}

std::vector<std::size_t> parse_dims(std::string_view text)
{
    std::vector<std::size_t> dims;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (const auto dots = item.find(".."); dots != std::string_view::npos) {
            const std::size_t lo = parse_count(item.substr(0, dots));
            const std::size_t hi = parse_count(item.substr(dots + 2));
            if (hi < lo)
                throw Error(ErrorCode::ConfigError, "empty dimension range '" + std::string(item) + "'");
            for (std::size_t d = lo; d <= hi; ++d)
                dims.push_back(d);
        } else {
            dims.push_back(parse_count(item));
        }
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    if (dims.empty())
        throw Error(ErrorCode::ConfigError, "no dimensions given");
    return dims;
}

json entropy_document(const Spectrum& s)
{
    const auto rv = renyi_vector(s);
    return {
        {"dim", s.dim()},
        {"spectrum", std::vector<double>(s.values().begin(), s.values().end())},
        {"renyi", rv.values()},
        {"von_neumann", von_neumann_direct(s)},
    };
}

json reconstruction_document(const RenyiVector& input, const ReconstructionResult& result)
{
    const auto& s = result.spectrum;
    return {
        {"dim", input.dim()},
        {"renyi", input.values()},
        {"spectrum", std::vector<double>(s.values().begin(), s.values().end())},
        {"von_neumann", result.von_neumann},
        {"residual", result.residual},
        {"feasible", result.feasible},
    };
}

json gradient_document(const Spectrum& s, const EntropyGradient& g)
{
    return {
        {"dim", s.dim()},
        {"spectrum", std::vector<double>(s.values().begin(), s.values().end())},
        {"dS_de", g.dS_de},
        {"dS_dr", g.dS_dr},
        {"dS_dSq", g.dS_dSq},
    };
}

std::string to_csv(const json& document)
{
    std::ostringstream out;
    out << "field,index,value\n";
    for (const auto& [key, value] : document.items()) {
        if (value.is_array()) {
            const std::size_t base = key == "spectrum" ? 0 : 2;
            for (std::size_t i = 0; i < value.size(); ++i)
                out << key << ',' << base + i << ',' << render(value[i]) << '\n';
        } else {
            out << key << ",," << render(value) << '\n';
        }
    }
    return out.str();
}

json config_to_json(const harness::SweepConfig& config)
{
    json checks = json::array();
    for (auto c : config.checks)
        checks.push_back(std::string(harness::to_string(c)));
    json tolerances = json::object();
    for (const auto& [name, value] : harness::default_tolerances())
        tolerances[name] = config.tol(name);
    return {
        {"dims", config.dims},
        {"samples", config.samples},
        {"seed", config.seed},
        {"checks", checks},
        {"tolerances", tolerances},
        {"timing", config.timing},
    };
}

harness::SweepConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::ConfigError, "sweep config must be a JSON object");
    harness::SweepConfig config;
    auto unsigned_field = [&](const json& v, const char* name) {
        if (!v.is_number_unsigned())
            throw Error(ErrorCode::ConfigError, std::string("'") + name + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "dims") {
            if (value.is_string()) {
                config.dims = parse_dims(value.get<std::string>());
            } else if (value.is_array()) {
                config.dims.clear();
                for (const auto& d : value)
                    config.dims.push_back(unsigned_field(d, "dims"));
            } else {
                throw Error(ErrorCode::ConfigError, "'dims' must be an array or a range string");
            }
        } else if (key == "samples") {
            config.samples = unsigned_field(value, "samples");
        } else if (key == "seed") {
            config.seed = unsigned_field(value, "seed");
        } else if (key == "threads") {
            config.threads = static_cast<unsigned>(unsigned_field(value, "threads"));
        } else if (key == "timing") {
            if (!value.is_boolean())
                throw Error(ErrorCode::ConfigError, "'timing' must be a boolean");
            config.timing = value.get<bool>();
        } else if (key == "checks") {
            if (!value.is_array())
                throw Error(ErrorCode::ConfigError, "'checks' must be an array of names");
            config.checks.clear();
            for (const auto& name : value) {
                if (!name.is_string())
                    throw Error(ErrorCode::ConfigError, "check names must be strings");
                config.checks.push_back(harness::parse_check(name.get<std::string>()));
            }
        } else if (key == "tolerances") {
            if (!value.is_object())
                throw Error(ErrorCode::ConfigError, "'tolerances' must be an object");
            for (const auto& [name, tol] : value.items()) {
                if (!tol.is_number())
                    throw Error(ErrorCode::ConfigError, "tolerance '" + name + "' must be a number");
                config.tolerances[name] = tol.get<double>();
            }
        } else {
            throw Error(ErrorCode::ConfigError, "unknown config field '" + key + "'");
        }
    }
    return config;
}

json report_to_json(const harness::VerificationReport& report)
{
    json checks = json::array();
    for (const auto& cr : report.checks) {
        json entry = {
            {"name", std::string(harness::to_string(cr.check))},
            {"pass", cr.pass()},
            {"passed", cr.passed},
            {"failed", cr.failed},
            {"skipped", cr.skipped},
            {"errors", cr.errors},
            {"worst_margin", cr.worst_margin ? json(*cr.worst_margin) : json(nullptr)},
        };
        if (cr.worst_margin)
            entry["worst"] = {
                {"dim", cr.worst_dim},
                {"sample", cr.worst_sample},
                {"spectrum", cr.worst_spectrum},
            };
        if (!cr.first_error.empty())
            entry["first_error"] = cr.first_error;
        if (report.config.timing)
            entry["wall_time_s"] = cr.wall_time_s;
        checks.push_back(std::move(entry));
    }
    return {
        {"schema", std::string(report_schema)},
        {"seed", report.config.seed},
        {"pass", report.pass},
        {"config", config_to_json(report.config)},
        {"checks", checks},
    };
}

} // namespace renyi::io
