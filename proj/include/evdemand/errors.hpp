#pragma once

#include <stdexcept>
#include <string>

namespace evdemand {

// Error taxonomy mirrors the CLI exit codes: config (2), data (3), model (4).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("E_CONFIG", msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error("E_DATA", msg) {}
};

class ModelError : public Error {
public:
    explicit ModelError(const std::string& msg) : Error("E_MODEL", msg) {}
};

} // namespace evdemand
