#pragma once

#include <stdexcept>
#include <string>

namespace ganaug {

// Bad arguments to an operation: failed preconditions, inconsistent sizes,
// out-of-range configuration values.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// A probability or other value outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Rejection sampling exhausted its attempt budget.
class InfeasibleSampling : public std::runtime_error {
public:
    explicit InfeasibleSampling(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Checkpoint file problems, one variant per failure class.
class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& msg) : std::runtime_error(msg) {}
};

class CheckpointVersionMismatch : public CheckpointError {
public:
    explicit CheckpointVersionMismatch(const std::string& msg) : CheckpointError(msg) {}
};

class CheckpointCorrupted : public CheckpointError {
public:
    explicit CheckpointCorrupted(const std::string& msg) : CheckpointError(msg) {}
};

class CheckpointMissingTensor : public CheckpointError {
public:
    explicit CheckpointMissingTensor(const std::string& msg) : CheckpointError(msg) {}
};

// Training produced a NaN/Inf loss; message carries epoch/step diagnostics.
class NonFiniteLoss : public std::runtime_error {
public:
    explicit NonFiniteLoss(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ganaug
