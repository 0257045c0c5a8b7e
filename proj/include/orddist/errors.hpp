#pragma once

#include <stdexcept>
#include <string>

namespace orddist {

// Bad input to an operation (maps to CLI exit code 2).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& m) : std::invalid_argument(m) {}
};

// A request that would exceed the configured memory/size budget (exit code 3).
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& m) : std::runtime_error(m) {}
};

// A certified-precision target that the chosen method cannot reach.
struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& m) : std::runtime_error(m) {}
};

// ord_p(g) requested at a prime dividing the numerator or denominator of g.
struct OrderUndefinedError : std::domain_error {
    explicit OrderUndefinedError(const std::string& m) : std::domain_error(m) {}
};

// A closed form was requested outside the hypotheses it is proved under.
struct HypothesisError : std::domain_error {
    explicit HypothesisError(const std::string& m) : std::domain_error(m) {}
};

// Checkpoint file problems: unknown version, corrupt record, spec mismatch.
struct CheckpointError : std::runtime_error {
    explicit CheckpointError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace orddist
