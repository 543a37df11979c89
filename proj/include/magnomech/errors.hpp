#pragma once

#include <stdexcept>
#include <string>

namespace magnomech {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDimensionError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

struct ContractViolationError : Error {
    using Error::Error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

struct CapacityError : Error {
    using Error::Error;
};

struct DegenerateDetuningError : Error {
    using Error::Error;
};

struct BracketError : Error {
    using Error::Error;
};

struct IdentificationError : Error {
    using Error::Error;
};

struct StepSizeError : Error {
    using Error::Error;
};

struct DivergenceError : Error {
    using Error::Error;
};

struct GridError : Error {
    using Error::Error;
};

struct VariantError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace magnomech
