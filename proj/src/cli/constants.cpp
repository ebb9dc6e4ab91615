#include "chronon/cli/constants.hpp"

#include "chronon/electron_cl/electron_cl.hpp"
#include "chronon/numcore/error.hpp"

namespace chronon::cli {

namespace {

std::vector<ConstantEntry> build() {
    std::vector<ConstantEntry> t{
        {"hbar", 6.582119569e-16, "eV s", "CODATA 2018 (exact: h and e fixed by SI 2019)"},
        {"hbar_cgs", 1.054571817e-27, "erg s", "CODATA 2018 (exact in SI)"},
        {"hbar_natural", 1.0, "1", "natural units"},
        {"c", 2.99792458e10, "cm/s", "SI definition of the metre"},
        {"c_natural", 1.0, "1", "natural units"},
        {"e", 4.803204712570263e-10, "statC", "exact: e = 1.602176634e-19 C times c / 10"},
        {"m_e", 9.1093837015e-28, "g", "CODATA 2018"},
        {"m_e_c2", 0.51099895000e6, "eV", "CODATA 2018"},
        {"m_mu", 1.883531627e-25, "g", "CODATA 2018"},
    };
    // (2/3) e^2 / (m_e c^3); cross-checked against 6.266e-24 s in the test suite.
    t.push_back({"theta0", electron_cl::chronon_constant(t[5].value, t[6].value, t[3].value), "s",
                 "derived: (2/3) e^2 / (m_e c^3)"});
    return t;
}

}  // namespace

const std::vector<ConstantEntry>& constants_table() {
    static const std::vector<ConstantEntry> t = build();
    return t;
}

const ConstantEntry& constant(const std::string& name) {
    for (const ConstantEntry& e : constants_table()) {
        if (e.name == name) return e;
    }
    throw Error("cli", "UnknownConstant", "no constant named '" + name + "'", ErrorKind::Config);
}

}  // namespace chronon::cli
