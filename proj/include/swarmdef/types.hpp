#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace swarmdef {

using Vec3 = Eigen::Vector3d;
using Vec3List = std::vector<Vec3>;

// Error hierarchy. Every failure the library reports derives from Error so
// callers (the CLI in particular) can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON syntax, wrong types, unknown fields).
class ParseError : public Error {
public:
    ParseError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A well-formed document whose values break a scenario invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Parameters that make a computation ill-posed (e.g. dt too large for the rates).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Argument outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite state produced during time integration.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, std::size_t step, std::size_t agent)
        : Error(what), step_(step), agent_(agent) {}
    std::size_t step() const noexcept { return step_; }
    std::size_t agent() const noexcept { return agent_; }

private:
    std::size_t step_;
    std::size_t agent_;
};

/// Internal bookkeeping violated (a bug, or inputs that bypassed validation).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace swarmdef
