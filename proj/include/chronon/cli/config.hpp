// Run configuration: line-oriented key = value text with [section] headers.
//
//   subcommand = lvn-fig2
//   units = ev-s
//   [lvn]
//   delta_E = 4 eV
//   tau = 6.26e-24, 1e-19 s      # one trailing unit covers the whole list
//
// Every dimensioned value is checked against the unit system at parse time:
// natural takes bare numbers only, ev-s and cgs require a unit of the right
// dimension. Values are stored converted to the system's base units.

#pragma once

#include "chronon/numcore/error.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chronon::cli {

enum class UnitSystem { Natural, EvSeconds, Cgs };
enum class OutputFormat { Csv, Record };
enum class ToleranceProfile { Strict, Fast };

const char* to_string(UnitSystem u);
const char* to_string(OutputFormat f);

enum class Dimension { None, Energy, Time, Length, Wavenumber, Mass, Velocity, EField, BField };

enum class ValueKind { Number, Integer, Text, Flag };

struct KeySchema {
    std::string section;
    std::string key;
    ValueKind kind = ValueKind::Number;
    Dimension dim = Dimension::None;
    std::size_t min_count = 1;  // list length bounds
    std::size_t max_count = 1;
    bool positive = false;
    bool required = false;
    std::vector<std::string> choices;  // Text only
};

struct Subcommand {
    std::string name;
    std::string canonical;  // alias target, equal to name otherwise
    std::vector<UnitSystem> units;
    std::vector<KeySchema> keys;
};

// All subcommands including aliases, in documentation order.
const std::vector<Subcommand>& subcommands();
const Subcommand& find_subcommand(const std::string& name);  // throws SchemaError

struct Value {
    std::vector<double> numbers;  // base units of the run's system
    std::string text;
    std::string unit;             // canonical unit token, empty when bare
    int line = 0;
};

struct RunConfig {
    std::string subcommand;
    UnitSystem units = UnitSystem::Natural;
    std::uint64_t seed = 0;
    std::optional<std::string> output_path;
    std::optional<OutputFormat> format;
    std::map<std::string, Value> values;  // "section.key"

    bool has(const std::string& qualified) const { return values.count(qualified) != 0; }
    double number(const std::string& qualified, double fallback) const;
    double number(const std::string& qualified) const;
    std::vector<double> list(const std::string& qualified) const;
    long long integer(const std::string& qualified, long long fallback) const;
    std::string text(const std::string& qualified, const std::string& fallback) const;
    bool flag(const std::string& qualified, bool fallback) const;

    bool operator==(const RunConfig& other) const;
};

// Error with the offending line (0 when not tied to a line) and qualified key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& name, int line, std::string key, const std::string& what);
    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

// Errors: cli.SchemaError, cli.UnitError, cli.UnknownKey.
RunConfig parse_config(const std::string& text);

// Canonical text: top-level keys, then sections and keys in schema order,
// numbers with 17 significant digits. parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

}  // namespace chronon::cli
