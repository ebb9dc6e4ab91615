// Batch front end: reads a run configuration, dispatches it and writes the
// result as CSV (+ sidecar metadata) or as one structured record.
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure,
// 4 tolerance failure.

#include "chronon/cli/dispatch.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace chronon;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cli", "SchemaError", "cannot read config file '" + path + "'", ErrorKind::Config);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Scalars of a record as a key,value table (nested keys joined with '.').
void flatten(const cli::Json& j, const std::string& prefix, cli::Table& t) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, t);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), t);
    } else if (j.is_number_integer()) {
        t.add({prefix, j.get<long long>()});
    } else if (j.is_number()) {
        t.add({prefix, j.get<double>()});
    } else {
        t.add({prefix, j.is_string() ? j.get<std::string>() : j.dump()});
    }
}

void write_output(const cli::ResultEnvelope& env, cli::OutputFormat fmt, const std::string& out) {
    const cli::Json doc = cli::envelope_to_json(env, true);
    if (fmt == cli::OutputFormat::Record) {
        if (out.empty()) {
            std::cout << doc.dump(2) << "\n";
        } else {
            std::ofstream f(out);
            f << doc.dump(2) << "\n";
        }
        return;
    }
    cli::Table table = env.data;
    if (table.empty()) {
        table.columns = {"key", "value"};
        flatten(env.record, "", table);
    }
    if (out.empty()) {
        cli::write_csv(std::cout, table);
        return;
    }
    std::ofstream f(out);
    cli::write_csv(f, table);
    cli::Json meta = doc;
    meta.erase("data");
    std::ofstream m(out + ".meta.json");
    m << meta.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference time evolution and quantum time observables"};
    std::string sub;
    std::string config_path;
    std::string out;
    std::string format;
    std::string profile = "strict";
    int threads = 0;
    std::optional<std::uint64_t> seed;

    std::vector<std::string> names;
    for (const auto& s : cli::subcommands()) names.push_back(s.name);
    app.add_option("subcommand", sub, "Subcommand; may instead come from the config file")
        ->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "Run configuration file");
    app.add_option("--out", out, "Output path (stdout when omitted)");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "record"}));
    app.add_option("--threads", threads, "OpenMP threads (0 keeps the default)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Seed for randomized inputs (overrides the config)");
    app.add_option("--tolerance-profile", profile, "Resolution profile")
        ->check(CLI::IsMember({"strict", "fast"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::string text;
        if (!config_path.empty()) {
            text = read_file(config_path);
        } else if (!sub.empty()) {
            text = "subcommand = " + sub + "\n";
        } else {
            throw Error("cli", "SchemaError", "give a subcommand or --config", ErrorKind::Config);
        }
        cli::RunConfig cfg = cli::parse_config(text);
        if (!sub.empty() && sub != cfg.subcommand) {
            throw Error("cli", "SchemaError",
                        "subcommand '" + sub + "' conflicts with config subcommand '" +
                            cfg.subcommand + "'",
                        ErrorKind::Config);
        }
        if (seed) cfg.seed = *seed;
        cli::OutputFormat fmt = cfg.format.value_or(cli::OutputFormat::Csv);
        if (!format.empty()) fmt = format == "csv" ? cli::OutputFormat::Csv : cli::OutputFormat::Record;
        if (out.empty() && cfg.output_path) out = *cfg.output_path;

        cli::RunOptions opts;
        opts.profile = profile == "fast" ? cli::ToleranceProfile::Fast : cli::ToleranceProfile::Strict;
        opts.threads = threads;
        const cli::ResultEnvelope env = cli::dispatch(cfg, opts);
        write_output(env, fmt, out);

        int failed = 0;
        for (const auto& c : env.checks) {
            if (!c.pass) {
                ++failed;
                std::cerr << "tolerance failure: " << c.name << " value " << c.value << " limit "
                          << c.limit << "\n";
            }
        }
        return failed == 0 ? 0 : 4;
    } catch (const Error& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return cli::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
