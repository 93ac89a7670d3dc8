#pragma once

#include <stdexcept>
#include <string>

namespace scnsyn {

// Base of every error raised by the library. kind() is a stable
// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Physically or mathematically invalid value (negative mobility, T <= 0, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// Malformed input structure (overlapping pulses, unsorted axes, bad files).
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error("input_error", what) {}
};

// A protocol could not be carried out on the given device.
class ProtocolError : public Error {
public:
    explicit ProtocolError(const std::string& what) : Error("protocol_error", what) {}
};

class UndefinedIndexError : public Error {
public:
    explicit UndefinedIndexError(const std::string& what) : Error("undefined_index", what) {}
};

class UnsatisfiableGateError : public Error {
public:
    explicit UnsatisfiableGateError(const std::string& what) : Error("unsatisfiable_gate", what) {}
};

class DegenerateFitError : public Error {
public:
    explicit DegenerateFitError(const std::string& what) : Error("degenerate_fit", what) {}
};

class NoEdgeError : public Error {
public:
    explicit NoEdgeError(const std::string& what) : Error("no_edge", what) {}
};

} // namespace scnsyn
