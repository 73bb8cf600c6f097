#pragma once

#include <stdexcept>
#include <string>

namespace evolforge {

// Root of the error hierarchy. Subclass families map onto CLI exit codes:
// BackendError -> 2, ValidationError -> 3, ToolchainMissing -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class BackendError : public Error {
public:
    using Error::Error;
};

class EmptyInstruction : public ValidationError {
public:
    EmptyInstruction() : ValidationError("instruction is empty after trimming") {}
};

class BackendUnavailable : public BackendError {
public:
    using BackendError::BackendError;
};

class AuthMissing : public BackendError {
public:
    using BackendError::BackendError;
};

class MalformedResponse : public BackendError {
public:
    using BackendError::BackendError;
};

// Backend rejected the request itself (4xx class); never retried.
class RequestRejected : public BackendError {
public:
    using BackendError::BackendError;
};

class TargetUnreachable : public BackendError {
public:
    using BackendError::BackendError;
};

class InsufficientSurvivors : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SuiteParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class AssemblyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EmptyCompletion : public ValidationError {
public:
    EmptyCompletion() : ValidationError("completion contains no extractable code") {}
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DatasetParseError : public ValidationError {
public:
    DatasetParseError(std::string msg, int line)
        : ValidationError(std::move(msg)), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class EmptyDataset : public ValidationError {
public:
    EmptyDataset() : ValidationError("dataset has no pairs") {}
};

class ToolchainMissing : public Error {
public:
    using Error::Error;
};

}  // namespace evolforge
