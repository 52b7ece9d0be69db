#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bltrend {

/// Base of every error raised by the toolkit. `kind()` is the stable name
/// written into reports (e.g. "DegenerateMatrix").
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message);
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("IoError", message) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error("ValidationError", message) {}
};

/// Judge payload is structurally wrong (missing field, wrong type, empty explanation).
class SchemaError : public Error {
public:
    SchemaError(const std::string& message, std::vector<std::string> missing = {})
        : Error("SchemaError", message), missing_(std::move(missing)) {}
    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    std::vector<std::string> missing_;
};

/// Judge payload carries a score outside the rubric scale.
class RangeError : public Error {
public:
    explicit RangeError(const std::string& message) : Error("RangeError", message) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& message) : Error("InsufficientData", message) {}
};

/// Zero variance where the statistic needs some to apportion.
class DegenerateMatrix : public Error {
public:
    explicit DegenerateMatrix(const std::string& message) : Error("DegenerateMatrix", message) {}
};

class RankError : public Error {
public:
    RankError(const std::string& message, std::vector<std::string> columns)
        : Error("RankError", message), columns_(std::move(columns)) {}
    const std::vector<std::string>& collinear_columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

/// Retries exhausted for one (paper, model) pair.
class JudgeError : public Error {
public:
    explicit JudgeError(const std::string& message) : Error("JudgeError", message) {}
};

/// Misconfiguration that retrying cannot fix (bad credentials, unknown provider).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error("ConfigError", message) {}
};

/// Network or HTTP-level failure; retryable.
class TransportError : public Error {
public:
    explicit TransportError(const std::string& message) : Error("TransportError", message) {}
};

/// Citation counts in one analysis come from different snapshot dates.
class SnapshotError : public Error {
public:
    explicit SnapshotError(const std::string& message) : Error("SnapshotError", message) {}
};

/// A downstream command ran before the command that produces its input.
class MissingPrerequisite : public Error {
public:
    MissingPrerequisite(const std::string& message, std::string command)
        : Error("MissingPrerequisite", message), command_(std::move(command)) {}
    const std::string& command() const noexcept { return command_; }

private:
    std::string command_;
};

}  // namespace bltrend
