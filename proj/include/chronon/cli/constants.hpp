#pragma once

#include <string>
#include <vector>

namespace chronon::cli {

struct ConstantEntry {
    std::string name;
    double value;
    std::string unit;
    std::string source;
};

// Exact SI definitions and CODATA 2018 recommended values.
const std::vector<ConstantEntry>& constants_table();
const ConstantEntry& constant(const std::string& name);

}  // namespace chronon::cli
