#include "renyi/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "renyi/entropy.hpp"
#include "renyi/error.hpp"
#include "renyi/harness.hpp"
#include "renyi/io.hpp"
#include "renyi/reconstruct.hpp"

namespace renyi::cli {

namespace {

using nlohmann::json;

struct InputOptions {
    std::string inline_values;
    std::string path;
    std::string format = "json";
};

void add_input_flags(CLI::App* cmd, InputOptions& in, const std::string& flag, const std::string& what)
{
    auto* inline_opt = cmd->add_option(flag, in.inline_values, "Comma separated " + what);
    auto* file_opt = cmd->add_option("--input", in.path, "Read " + what + " from a JSON or CSV file");
    inline_opt->excludes(file_opt);
    cmd->add_option("--format", in.format, "Input/output format")->check(CLI::IsMember({"json", "csv"}));
}

json read_document(const std::string& path)
{
    std::ifstream file(path);
    if (!file)
        throw Error(ErrorCode::ConfigError, "cannot open '" + path + "'");
    try {
        return json::parse(file);
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ConfigError, "invalid JSON in '" + path + "': " + ex.what());
    }
}

std::vector<double> read_csv(const std::string& path)
{
    std::ifstream file(path);
    if (!file)
        throw Error(ErrorCode::ConfigError, "cannot open '" + path + "'");
    return io::parse_csv_values(file);
}

std::vector<double> numbers_field(const json& doc, const char* field)
{
    if (!doc.is_object() || !doc.contains(field) || !doc[field].is_array())
        throw Error(ErrorCode::ConfigError, std::string("input document needs an array field '") + field + "'");
    std::vector<double> out;
    for (const auto& v : doc[field]) {
        if (!v.is_number())
            throw Error(ErrorCode::ConfigError, std::string("'") + field + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

Spectrum read_spectrum(const InputOptions& in)
{
    std::vector<double> values;
    if (!in.inline_values.empty())
        values = io::parse_list(in.inline_values);
    else if (in.path.empty())
        throw Error(ErrorCode::ConfigError, "give --spectrum or --input");
    else if (io::parse_format(in.format) == io::Format::Csv)
        values = read_csv(in.path);
    else
        values = numbers_field(read_document(in.path), "spectrum");
    return make_spectrum(values);
}

void emit(std::ostream& out, const json& doc, const std::string& format)
{
    if (io::parse_format(format) == io::Format::Csv)
        out << io::to_csv(doc);
    else
        out << doc.dump(2) << '\n';
}

struct ReconstructOptions {
    InputOptions input;
    std::size_t dim = 0;
};

RenyiVector read_renyi(const ReconstructOptions& opts)
{
    std::vector<double> values;
    std::size_t dim = opts.dim;
    const auto& in = opts.input;
    if (!in.inline_values.empty()) {
        values = io::parse_list(in.inline_values);
    } else if (in.path.empty()) {
        throw Error(ErrorCode::ConfigError, "give --renyi or --input");
    } else if (io::parse_format(in.format) == io::Format::Csv) {
        values = read_csv(in.path);
    } else {
        const json doc = read_document(in.path);
        values = numbers_field(doc, "renyi");
        if (doc.contains("dim")) {
            if (!doc["dim"].is_number_unsigned())
                throw Error(ErrorCode::ConfigError, "'dim' must be a positive integer");
            const auto doc_dim = doc["dim"].get<std::size_t>();
            if (dim != 0 && dim != doc_dim)
                throw Error(ErrorCode::ConfigError, "--dim disagrees with the input document");
            dim = doc_dim;
        }
    }
    if (dim == 0)
        dim = values.size() + 1;
    if (dim != values.size() + 1)
        throw Error(ErrorCode::LengthMismatch, "dimension " + std::to_string(dim) + " needs " +
                                                   std::to_string(dim - 1) + " Renyi entropies, got " +
                                                   std::to_string(values.size()));
    return RenyiVector(dim, std::move(values));
}

struct VerifyOptions {
    std::string config_path;
    std::string dims;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::string checks;
    std::vector<std::string> tolerances;
    unsigned threads = 0;
    bool timing = false;
    std::string output;
};

harness::SweepConfig build_config(const VerifyOptions& opts)
{
    harness::SweepConfig config;
    if (!opts.config_path.empty())
        config = io::config_from_json(read_document(opts.config_path));
    if (!opts.dims.empty())
        config.dims = io::parse_dims(opts.dims);
    if (opts.samples)
        config.samples = *opts.samples;
    if (opts.seed)
        config.seed = *opts.seed;
    if (!opts.checks.empty()) {
        config.checks.clear();
        std::string_view rest = opts.checks;
        while (true) {
            const auto comma = rest.find(',');
            config.checks.push_back(harness::parse_check(rest.substr(0, comma)));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
    }
    for (const auto& item : opts.tolerances) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigError, "--tol expects name=value, got '" + item + "'");
        const auto values = io::parse_list(std::string_view(item).substr(eq + 1));
        if (values.size() != 1)
            throw Error(ErrorCode::ConfigError, "--tol expects a single value in '" + item + "'");
        config.tolerances[item.substr(0, eq)] = values.front();
    }
    if (opts.threads > 0)
        config.threads = opts.threads;
    if (opts.timing)
        config.timing = true;
    harness::validate(config);
    return config;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Renyi / von Neumann entropy toolkit: conversions, reconstruction, gradients and sweeps"};
    app.require_subcommand(1);

    InputOptions entropy_in;
    auto* entropy = app.add_subcommand("entropy", "von Neumann and Renyi entropies of a spectrum");
    add_input_flags(entropy, entropy_in, "--spectrum", "eigenvalues");

    ReconstructOptions recon_opts;
    auto* reconstruct = app.add_subcommand("reconstruct", "Recover the spectrum from S_2..S_d");
    add_input_flags(reconstruct, recon_opts.input, "--renyi", "Renyi entropies S_2..S_d");
    reconstruct->add_option("--dim", recon_opts.dim, "Dimension d (defaults to count + 1)");

    InputOptions gradient_in;
    double abs_tol = defaults::quad_abs_tol;
    auto* gradient = app.add_subcommand("gradient", "dS/de_k, dS/dr_q and dS/dS_q of a spectrum");
    add_input_flags(gradient, gradient_in, "--spectrum", "eigenvalues");
    gradient->add_option("--abs-tol", abs_tol, "Quadrature tolerance");

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "Randomized certification sweep");
    verify->add_option("--config", verify_opts.config_path, "Sweep configuration (JSON)");
    verify->add_option("--dims", verify_opts.dims, "Dimensions, e.g. 2..8 or 2,3,5");
    verify->add_option("--samples", verify_opts.samples, "Samples per dimension");
    verify->add_option("--seed", verify_opts.seed, "64-bit seed");
    verify->add_option("--checks", verify_opts.checks, "Comma separated subset of checks");
    verify->add_option("--tol", verify_opts.tolerances, "Tolerance override name=value (repeatable)");
    verify->add_option("--threads", verify_opts.threads, "Worker threads (overrides RENYI_SPECTRUM_THREADS)");
    verify->add_flag("--timing", verify_opts.timing, "Include wall times in the report");
    verify->add_option("--output", verify_opts.output, "Write the report here instead of stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_usage;
    }

    try {
        if (*entropy) {
            emit(out, io::entropy_document(read_spectrum(entropy_in)), entropy_in.format);
            return exit_ok;
        }
        if (*reconstruct) {
            const RenyiVector rv = read_renyi(recon_opts);
            // Reconstruction is ill-conditioned in double; run it in binary128.
            const auto wide = reconstruct_spectrum(rv.cast<quad>());
            const ReconstructionResult result{wide.spectrum.cast<double>(), static_cast<double>(wide.von_neumann),
                                              static_cast<double>(wide.residual), wide.feasible};
            emit(out, io::reconstruction_document(rv, result), recon_opts.input.format);
            if (!result.feasible) {
                err << "error: recovered spectrum misses the requested entropies by " << result.residual << '\n';
                return exit_check_failed;
            }
            return exit_ok;
        }
        if (*gradient) {
            const Spectrum s = read_spectrum(gradient_in);
            emit(out, io::gradient_document(s, entropy_gradient(elem_sym_direct(s), abs_tol)), gradient_in.format);
            return exit_ok;
        }
        if (*verify) {
            const auto config = build_config(verify_opts);
            const auto report = harness::run_sweep(config);
            const std::string text = io::report_to_json(report).dump(2) + "\n";
            if (verify_opts.output.empty()) {
                out << text;
            } else {
                std::ofstream file(verify_opts.output, std::ios::binary);
                if (!file)
                    throw Error(ErrorCode::ConfigError, "cannot write '" + verify_opts.output + "'");
                file << text;
            }
            return report.pass ? exit_ok : exit_check_failed;
        }
    } catch (const InfeasibleError& ex) {
        err << "error: " << ex.what() << " (stage " << to_string(ex.stage()) << ", cause " << to_string(ex.cause())
            << ")\n";
        return exit_usage;
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

int cli_main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

} // namespace renyi::cli
