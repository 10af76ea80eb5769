#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affvol {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters outside the admissible set (kernel order, negative rates, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller violated an interface precondition (grid mismatch, bad index).
class ContractError : public Error {
public:
    using Error::Error;
};

// The requested operation is not available for this input.
class CapabilityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, std::size_t node, double residual)
        : Error(what), node_(node), residual_(residual) {}
    std::size_t node() const noexcept { return node_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t node_;
    double residual_;
};

// A structural invariant was violated by a computed quantity.
class InvariantError : public Error {
public:
    InvariantError(const std::string& what, std::size_t node, double magnitude)
        : Error(what), node_(node), magnitude_(magnitude) {}
    std::size_t node() const noexcept { return node_; }
    double magnitude() const noexcept { return magnitude_; }

private:
    std::size_t node_;
    double magnitude_;
};

}  // namespace affvol
