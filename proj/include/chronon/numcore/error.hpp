#pragma once

#include <stdexcept>
#include <string>

namespace chronon {

// Exit-code class of a failure; the CLI maps these onto process status.
enum class ErrorKind { Config, Numerical, Tolerance };

// Module-qualified error. code() reads like "numcore.NonHermitianInput".
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string name, const std::string& what,
          ErrorKind kind = ErrorKind::Numerical)
        : std::runtime_error(module + "." + name + ": " + what),
          module_(std::move(module)), name_(std::move(name)), kind_(kind) {}

    const std::string& module() const noexcept { return module_; }
    const std::string& name() const noexcept { return name_; }
    std::string code() const { return module_ + "." + name_; }
    ErrorKind kind() const noexcept { return kind_; }

private:
    std::string module_;
    std::string name_;
    ErrorKind kind_;
};

}  // namespace chronon
