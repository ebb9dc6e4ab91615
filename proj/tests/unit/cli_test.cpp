#include "chronon/cli/config.hpp"
#include "chronon/cli/constants.hpp"
#include "chronon/cli/dispatch.hpp"
#include "chronon/cli/output.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <sstream>

using namespace chronon;
using namespace chronon::cli;

namespace {

ConfigError parse_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a configuration error");
    return ConfigError("none", 0, "", "");
}

}  // namespace

TEST_CASE("config round-trips through its canonical text") {
    const std::string text =
        "subcommand = lvn-fig2\n"
        "units = ev-s   # energies in eV\n"
        "seed = 12\n"
        "[lvn]\n"
        "delta_E = 4000 meV\n"
        "tau = 6.26e-24, 1e-19 s\n"
        "samples = 50\n"
        "[output]\n"
        "format = record\n";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.units == UnitSystem::EvSeconds);
    CHECK(cfg.seed == 12);
    CHECK(cfg.number("lvn.delta_E") == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(cfg.list("lvn.tau") == std::vector<double>{6.26e-24, 1e-19});
    CHECK(cfg.format == OutputFormat::Record);
    const std::string canon = emit_config(cfg);
    CHECK(parse_config(canon) == cfg);
    CHECK(emit_config(parse_config(canon)) == canon);
}

TEST_CASE("time units convert into seconds") {
    const auto cfg = parse_config("subcommand = lvn-fig2\nunits = ev-s\n[lvn]\ndelta_E = 1 keV\ntau = 2 fs\n");
    CHECK(cfg.number("lvn.delta_E") == 1000.0);
    CHECK(cfg.number("lvn.tau") == doctest::Approx(2e-15).epsilon(1e-15));
}

TEST_CASE("unit errors name the line and key") {
    auto e = parse_error("subcommand = lvn-fig2\nunits = ev-s\n[lvn]\ndelta_E = 4 s\ntau = 1 s\n");
    CHECK(e.code() == "cli.UnitError");
    CHECK(e.line() == 4);
    CHECK(e.key() == "lvn.delta_E");
    CHECK(e.kind() == ErrorKind::Config);

    e = parse_error("subcommand = lvn-fig2\n[lvn]\ndelta_E = 4 eV\ntau = 1\n");
    CHECK(e.code() == "cli.UnitError");
    CHECK(e.line() == 3);

    e = parse_error("subcommand = lvn-fig2\nunits = ev-s\n[lvn]\ndelta_E = 4\ntau = 1 s\n");
    CHECK(e.code() == "cli.UnitError");
}

TEST_CASE("unknown keys and sections are rejected") {
    auto e = parse_error("subcommand = lvn-fig2\n[lvn]\ndelta_E = 4\ntau = 1\nfoo = 2\n");
    CHECK(e.code() == "cli.UnknownKey");
    CHECK(e.line() == 5);
    CHECK(e.key() == "lvn.foo");
    e = parse_error("subcommand = lvn-fig2\n[kg]\nmass = 1\n");
    CHECK(e.code() == "cli.UnknownKey");
}

TEST_CASE("schema violations") {
    auto e = parse_error("subcommand = lvn-fig2\n[lvn]\ndelta_E = 4\ntau = 0\n");
    CHECK(e.code() == "cli.SchemaError");
    CHECK(e.key() == "lvn.tau");
    e = parse_error("subcommand = lvn-fig2\n[lvn]\ndelta_E = 4\n");
    CHECK(e.code() == "cli.SchemaError");
    e = parse_error("subcommand = teleport\n");
    CHECK(e.code() == "cli.SchemaError");
    e = parse_error("subcommand = lvn-fig2\n[lvn]\ndelta_E = 4\ntau = 1\ntau = 2\n");
    CHECK(e.code() == "cli.SchemaError");
    e = parse_error("subcommand = lvn-fig2\n[lvn]\ndelta_E = four\ntau = 1\n");
    CHECK(e.code() == "cli.SchemaError");
}

TEST_CASE("numbers print with 17 significant digits and read back exactly") {
    for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0}) {
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(format_double(0.1) == "1.0000000000000001e-01");
}

TEST_CASE("CSV quoting follows RFC 4180") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    Table t;
    t.columns = {"t", "label", "n"};
    t.add({0.5, std::string("x,y"), 3LL});
    std::ostringstream os;
    write_csv(os, t);
    CHECK(os.str() == "t,label,n\n5.0000000000000000e-01,\"x,y\",3\n");
    const Json j = table_to_json(t);
    CHECK(j["n"][0] == 3);
}

TEST_CASE("dispatch is deterministic for a fixed seed") {
    const auto cfg = parse_config("subcommand = chronon-evolve\nseed = 5\n[chronon]\ndim = 4\ntau = 0.1\nsteps = 20\n");
    const auto a = dispatch(cfg);
    const auto b = dispatch(cfg);
    CHECK(envelope_to_json(a, false).dump() == envelope_to_json(b, false).dump());
    CHECK(a.tolerance_ok());
    auto other = cfg;
    other.seed = 6;
    CHECK(envelope_to_json(dispatch(other), false)["data"] != envelope_to_json(a, false)["data"]);
}

TEST_CASE("constants subcommand checks the chronon value") {
    const auto env = dispatch(parse_config("subcommand = constants\n"));
    CHECK(env.tolerance_ok());
    CHECK(constant("theta0").value == doctest::Approx(6.266e-24).epsilon(1e-3));
    CHECK(constant("hbar").value == 6.582119569e-16);
}

TEST_CASE("exit codes by error kind") {
    CHECK(exit_code_for(ErrorKind::Config) == 2);
    CHECK(exit_code_for(ErrorKind::Numerical) == 3);
    CHECK(exit_code_for(ErrorKind::Tolerance) == 4);
}
