#include "chronon/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace chronon::cli {

namespace {

using U = UnitSystem;
using D = Dimension;
using K = ValueKind;

KeySchema num(std::string section, std::string key, D dim, bool positive = false,
              bool required = false, std::size_t count = 1) {
    return {std::move(section), std::move(key), K::Number, dim, count, count, positive, required, {}};
}

KeySchema list(std::string section, std::string key, D dim, std::size_t lo, std::size_t hi,
               bool required = false, bool positive = false) {
    return {std::move(section), std::move(key), K::Number, dim, lo, hi, positive, required, {}};
}

KeySchema integer(std::string section, std::string key, bool required = false) {
    return {std::move(section), std::move(key), K::Integer, D::None, 1, 1, true, required, {}};
}

KeySchema text(std::string section, std::string key, std::vector<std::string> choices) {
    return {std::move(section), std::move(key), K::Text, D::None, 1, 1, false, false,
            std::move(choices)};
}

KeySchema flag(std::string section, std::string key) {
    return {std::move(section), std::move(key), K::Flag, D::None, 1, 1, false, false, {}};
}

std::vector<KeySchema> timeobs_keys() {
    return {
        text("timeobs", "dispersion", {"massive", "massless"}),
        num("timeobs", "mass", D::Mass, true),
        num("timeobs", "k_mean", D::Wavenumber, true, true),
        num("timeobs", "sigma_k", D::Wavenumber, true, true),
        num("timeobs", "x0", D::Length, false, true),
        num("timeobs", "barrier_V0", D::Energy),
        num("timeobs", "barrier_start", D::Length),
        num("timeobs", "barrier_width", D::Length, true),
        num("timeobs", "x_i", D::Length, false, true),
        num("timeobs", "x_f", D::Length, false, true),
        num("timeobs", "x_r", D::Length),
        integer("timeobs", "series_stride"),
    };
}

std::vector<KeySchema> electron_keys() {
    return {
        text("electron", "scenario", {"free", "pulse", "uniform-B", "hyperbolic", "internal"}),
        text("electron", "scheme", {"retarded", "symmetric", "advanced"}),
        flag("electron", "relativistic"),
        text("electron", "law", {"averaged", "difference"}),
        num("electron", "tau0", D::Time, true),
        integer("electron", "steps"),
        num("electron", "v0", D::Velocity, false, false, 3),
        num("electron", "E", D::EField, false, false, 3),
        num("electron", "B", D::BField, false, false, 3),
        num("electron", "t_on", D::Time),
    };
}

std::vector<Subcommand> build_subcommands() {
    std::vector<Subcommand> s;
    s.push_back({"timeobs", "timeobs", {U::Natural}, timeobs_keys()});
    s.push_back({"timeobs-free", "timeobs", {U::Natural}, timeobs_keys()});
    s.push_back({"dwell", "dwell", {U::Natural}, timeobs_keys()});
    s.push_back({"discretespec", "discretespec", {U::Natural, U::EvSeconds},
                 {list("discretespec", "levels", D::Energy, 1, 4096, true),
                  list("discretespec", "amplitudes", D::None, 1, 4096),
                  num("discretespec", "gamma", D::Time),
                  integer("discretespec", "samples"),
                  num("discretespec", "cycles", D::None, true)}});
    s.push_back({"chronon-evolve", "chronon-evolve", {U::Natural},
                 {integer("chronon", "dim"),
                  num("chronon", "tau", D::Time, true, true),
                  integer("chronon", "steps", true),
                  text("chronon", "scheme", {"retarded", "symmetric", "advanced"}),
                  text("chronon", "seed_mode", {"stable", "euler"}),
                  num("chronon", "spread", D::Energy, true)}});
    s.push_back({"lvn", "lvn", {U::Natural, U::EvSeconds},
                 {list("lvn", "levels", D::Energy, 2, 64, true),
                  num("lvn", "tau", D::Time, true, true),
                  integer("lvn", "steps", true)}});
    s.push_back({"lvn-fig2", "lvn-fig2", {U::Natural, U::EvSeconds},
                 {num("lvn", "delta_E", D::Energy, true, true),
                  list("lvn", "tau", D::Time, 1, 16, true, true),
                  num("lvn", "t_max", D::Time, true),
                  integer("lvn", "samples")}});
    s.push_back({"electron", "electron", {U::Natural, U::Cgs}, electron_keys()});
    s.push_back({"electron-pulse", "electron", {U::Natural, U::Cgs}, electron_keys()});
    s.push_back({"kg-localize", "kg-localize", {U::Natural},
                 {num("kg", "mass", D::Mass, true),
                  num("kg", "center", D::Wavenumber, false, false, 3),
                  num("kg", "widths", D::Wavenumber, true, false, 3),
                  num("kg", "shift", D::Length, false, false, 3),
                  integer("kg", "n")}});
    s.push_back({"constants", "constants", {U::Natural, U::EvSeconds, U::Cgs}, {}});
    return s;
}

struct UnitEntry {
    U system;
    D dim;
    const char* token;
    double factor;  // value in base units = number * factor
};

// Base units: ev-s uses eV and s; cgs uses s, cm/s, statV/cm, G, g.
const std::vector<UnitEntry>& unit_table() {
    static const std::vector<UnitEntry> t{
        {U::EvSeconds, D::Energy, "eV", 1.0},
        {U::EvSeconds, D::Energy, "meV", 1e-3},
        {U::EvSeconds, D::Energy, "keV", 1e3},
        {U::EvSeconds, D::Energy, "MeV", 1e6},
        {U::EvSeconds, D::Time, "s", 1.0},
        {U::EvSeconds, D::Time, "ms", 1e-3},
        {U::EvSeconds, D::Time, "us", 1e-6},
        {U::EvSeconds, D::Time, "ns", 1e-9},
        {U::EvSeconds, D::Time, "ps", 1e-12},
        {U::EvSeconds, D::Time, "fs", 1e-15},
        {U::EvSeconds, D::Time, "as", 1e-18},
        {U::Cgs, D::Time, "s", 1.0},
        {U::Cgs, D::Velocity, "cm/s", 1.0},
        {U::Cgs, D::EField, "statV/cm", 1.0},
        {U::Cgs, D::BField, "G", 1.0},
        {U::Cgs, D::Mass, "g", 1.0},
    };
    return t;
}

const char* base_unit(U system, D dim) {
    for (const UnitEntry& e : unit_table()) {
        if (e.system == system && e.dim == dim && e.factor == 1.0) return e.token;
    }
    return nullptr;
}

const char* dimension_name(D d) {
    switch (d) {
        case D::None: return "dimensionless";
        case D::Energy: return "energy";
        case D::Time: return "time";
        case D::Length: return "length";
        case D::Wavenumber: return "wavenumber";
        case D::Mass: return "mass";
        case D::Velocity: return "velocity";
        case D::EField: return "electric field";
        case D::BField: return "magnetic field";
    }
    return "?";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& key,
                       const std::string& what) {
    throw ConfigError(name, line, key, what);
}

UnitSystem parse_units(const std::string& v, int line) {
    if (v == "natural") return U::Natural;
    if (v == "ev-s") return U::EvSeconds;
    if (v == "cgs") return U::Cgs;
    fail("SchemaError", line, "units", "expected natural, ev-s or cgs, got '" + v + "'");
}

// Splits "1, 2, 3 unit" into number tokens and an optional trailing unit.
void split_value(const std::string& raw, std::vector<std::string>& numbers, std::string& unit) {
    std::string body = trim(raw);
    const auto sp = body.find_last_of(" \t");
    if (sp != std::string::npos) {
        const std::string tail = body.substr(sp + 1);
        if (!parse_double(tail)) {
            unit = tail;
            body = trim(body.substr(0, sp));
        }
    } else if (!body.empty() && !parse_double(body) && body.find(',') == std::string::npos) {
        unit = body;
        body.clear();
    }
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) numbers.push_back(trim(tok));
}

Value parse_value(const KeySchema& ks, U system, const std::string& raw, int line,
                  const std::string& qkey) {
    Value v;
    v.line = line;
    const std::string body = trim(raw);
    if (ks.kind == K::Text) {
        if (std::find(ks.choices.begin(), ks.choices.end(), body) == ks.choices.end()) {
            std::string opts;
            for (const auto& c : ks.choices) opts += (opts.empty() ? "" : ", ") + c;
            fail("SchemaError", line, qkey, "expected one of {" + opts + "}, got '" + body + "'");
        }
        v.text = body;
        return v;
    }
    if (ks.kind == K::Flag) {
        if (body != "true" && body != "false") {
            fail("SchemaError", line, qkey, "expected true or false, got '" + body + "'");
        }
        v.text = body;
        return v;
    }
    std::vector<std::string> toks;
    std::string unit;
    split_value(body, toks, unit);
    if (toks.size() < ks.min_count || toks.size() > ks.max_count) {
        fail("SchemaError", line, qkey,
             "expected " + std::to_string(ks.min_count) +
                 (ks.max_count != ks.min_count ? ".." + std::to_string(ks.max_count) : "") +
                 " value(s), got " + std::to_string(toks.size()));
    }
    double factor = 1.0;
    if (ks.kind == K::Integer || ks.dim == D::None || system == U::Natural) {
        if (!unit.empty()) {
            const std::string why = ks.dim == D::None || ks.kind == K::Integer
                                        ? "takes no unit"
                                        : "must be a bare number under units = natural";
            fail("UnitError", line, qkey, "unit '" + unit + "' rejected: " + why);
        }
    } else {
        const char* base = base_unit(system, ks.dim);
        if (base == nullptr) {
            fail("UnitError", line, qkey,
                 std::string("no ") + dimension_name(ks.dim) + " unit under units = " +
                     to_string(system) + "; use units = natural");
        }
        if (unit.empty()) {
            fail("UnitError", line, qkey,
                 std::string("missing unit; expected ") + dimension_name(ks.dim) + " such as '" +
                     base + "'");
        }
        bool found = false;
        for (const UnitEntry& e : unit_table()) {
            if (e.system == system && e.dim == ks.dim && unit == e.token) {
                factor = e.factor;
                found = true;
            }
        }
        if (!found) {
            fail("UnitError", line, qkey,
                 "unit '" + unit + "' is not a " + dimension_name(ks.dim) + " unit under units = " +
                     to_string(system));
        }
        v.unit = base;
    }
    for (const std::string& t : toks) {
        const auto d = parse_double(t);
        if (!d) fail("SchemaError", line, qkey, "'" + t + "' is not a number");
        if (ks.kind == K::Integer && (*d != std::floor(*d) || std::abs(*d) > 1e15)) {
            fail("SchemaError", line, qkey, "'" + t + "' is not an integer");
        }
        const double x = *d * factor;
        if (ks.positive && !(x > 0.0)) fail("SchemaError", line, qkey, "must be > 0");
        v.numbers.push_back(x);
    }
    return v;
}

const KeySchema* find_key(const Subcommand& sc, const std::string& section,
                          const std::string& key) {
    for (const KeySchema& ks : sc.keys) {
        if (ks.section == section && ks.key == key) return &ks;
    }
    return nullptr;
}

}  // namespace

const char* to_string(UnitSystem u) {
    switch (u) {
        case U::Natural: return "natural";
        case U::EvSeconds: return "ev-s";
        case U::Cgs: return "cgs";
    }
    return "?";
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "record"; }

const std::vector<Subcommand>& subcommands() {
    static const std::vector<Subcommand> s = build_subcommands();
    return s;
}

const Subcommand& find_subcommand(const std::string& name) {
    for (const Subcommand& s : subcommands()) {
        if (s.name == name) return s;
    }
    throw ConfigError("SchemaError", 0, "subcommand", "unknown subcommand '" + name + "'");
}

ConfigError::ConfigError(const std::string& name, int line, std::string key,
                         const std::string& what)
    : Error("cli", name,
            (line > 0 ? "line " + std::to_string(line) + ", " : std::string()) + "key '" + key +
                "': " + what,
            ErrorKind::Config),
      line_(line),
      key_(std::move(key)) {}

double RunConfig::number(const std::string& q, double fallback) const {
    auto it = values.find(q);
    return it == values.end() ? fallback : it->second.numbers.at(0);
}

double RunConfig::number(const std::string& q) const {
    auto it = values.find(q);
    if (it == values.end()) throw ConfigError("SchemaError", 0, q, "required key missing");
    return it->second.numbers.at(0);
}

std::vector<double> RunConfig::list(const std::string& q) const {
    auto it = values.find(q);
    return it == values.end() ? std::vector<double>{} : it->second.numbers;
}

long long RunConfig::integer(const std::string& q, long long fallback) const {
    auto it = values.find(q);
    return it == values.end() ? fallback : static_cast<long long>(it->second.numbers.at(0));
}

std::string RunConfig::text(const std::string& q, const std::string& fallback) const {
    auto it = values.find(q);
    return it == values.end() ? fallback : it->second.text;
}

bool RunConfig::flag(const std::string& q, bool fallback) const {
    auto it = values.find(q);
    return it == values.end() ? fallback : it->second.text == "true";
}

bool RunConfig::operator==(const RunConfig& o) const {
    if (subcommand != o.subcommand || units != o.units || seed != o.seed ||
        output_path != o.output_path || format != o.format || values.size() != o.values.size()) {
        return false;
    }
    for (const auto& [k, v] : values) {
        auto it = o.values.find(k);
        if (it == o.values.end()) return false;
        if (v.numbers != it->second.numbers || v.text != it->second.text ||
            v.unit != it->second.unit) {
            return false;
        }
    }
    return true;
}

RunConfig parse_config(const std::string& input) {
    RunConfig cfg;
    struct Pending {
        std::string section;
        std::string key;
        std::string raw;
        int line;
    };
    std::vector<Pending> pending;
    bool have_sub = false;
    std::string section;
    std::istringstream in(input);
    std::string line_text;
    int line = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line_text)) {
        ++line;
        const auto hash = line_text.find('#');
        const std::string l = trim(hash == std::string::npos ? line_text : line_text.substr(0, hash));
        if (l.empty()) continue;
        if (l.front() == '[') {
            if (l.back() != ']' || l.size() < 3) fail("SchemaError", line, l, "malformed section header");
            section = trim(l.substr(1, l.size() - 2));
            continue;
        }
        const auto assign = l.find('=');
        if (assign == std::string::npos) fail("SchemaError", line, l, "expected key = value");
        const std::string key = trim(l.substr(0, assign));
        const std::string raw = trim(l.substr(assign + 1));
        const std::string q = section.empty() ? key : section + "." + key;
        if (key.empty()) fail("SchemaError", line, q, "empty key");
        if (raw.empty()) fail("SchemaError", line, q, "empty value");
        if (seen.count(q)) {
            fail("SchemaError", line, q, "duplicate key (first on line " + std::to_string(seen[q]) + ")");
        }
        seen[q] = line;
        if (section.empty() || section == "run") {
            if (key == "subcommand") {
                find_subcommand(raw);
                cfg.subcommand = raw;
                have_sub = true;
            } else if (key == "units") {
                cfg.units = parse_units(raw, line);
            } else if (key == "seed") {
                std::uint64_t s = 0;
                auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), s);
                if (ec != std::errc() || p != raw.data() + raw.size()) {
                    fail("SchemaError", line, q, "seed must be a nonnegative integer");
                }
                cfg.seed = s;
            } else {
                fail("UnknownKey", line, q, "not a run key (subcommand, units, seed)");
            }
            continue;
        }
        if (section == "output") {
            if (key == "path") {
                cfg.output_path = raw;
            } else if (key == "format") {
                if (raw == "csv") {
                    cfg.format = OutputFormat::Csv;
                } else if (raw == "record") {
                    cfg.format = OutputFormat::Record;
                } else {
                    fail("SchemaError", line, q, "expected csv or record");
                }
            } else {
                fail("UnknownKey", line, q, "not an output key (path, format)");
            }
            continue;
        }
        pending.push_back({section, key, raw, line});
    }
    if (!have_sub) fail("SchemaError", 0, "subcommand", "required key missing");
    const Subcommand& sc = find_subcommand(cfg.subcommand);
    if (std::find(sc.units.begin(), sc.units.end(), cfg.units) == sc.units.end()) {
        fail("UnitError", seen.count("units") ? seen["units"] : 0, "units",
             std::string("subcommand '") + sc.name + "' does not run under units = " +
                 to_string(cfg.units));
    }
    for (const Pending& p : pending) {
        const std::string q = p.section + "." + p.key;
        const KeySchema* ks = find_key(sc, p.section, p.key);
        if (ks == nullptr) {
            fail("UnknownKey", p.line, q, "not a parameter of subcommand '" + sc.name + "'");
        }
        cfg.values[q] = parse_value(*ks, cfg.units, p.raw, p.line, q);
    }
    for (const KeySchema& ks : sc.keys) {
        const std::string q = ks.section + "." + ks.key;
        if (ks.required && !cfg.has(q)) fail("SchemaError", 0, q, "required key missing");
    }
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    const Subcommand& sc = find_subcommand(cfg.subcommand);
    std::ostringstream out;
    out << "subcommand = " << cfg.subcommand << "\n";
    out << "units = " << to_string(cfg.units) << "\n";
    out << "seed = " << cfg.seed << "\n";
    if (cfg.output_path || cfg.format) {
        out << "[output]\n";
        if (cfg.output_path) out << "path = " << *cfg.output_path << "\n";
        if (cfg.format) out << "format = " << to_string(*cfg.format) << "\n";
    }
    std::string section;
    for (const KeySchema& ks : sc.keys) {
        const std::string q = ks.section + "." + ks.key;
        auto it = cfg.values.find(q);
        if (it == cfg.values.end()) continue;
        if (ks.section != section) {
            section = ks.section;
            out << "[" << section << "]\n";
        }
        out << ks.key << " = ";
        const Value& v = it->second;
        if (ks.kind == K::Text || ks.kind == K::Flag) {
            out << v.text;
        } else {
            for (std::size_t i = 0; i < v.numbers.size(); ++i) {
                if (i) out << ", ";
                out << format_number(v.numbers[i]);
            }
            if (!v.unit.empty()) out << " " << v.unit;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace chronon::cli
