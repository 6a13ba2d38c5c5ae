#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mobility {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or unusable input data. Maps to exit code 2 at the CLI.
class DataError : public Error {
public:
    using Error::Error;
};

// A single input record failed validation.
class RecordError : public DataError {
public:
    using DataError::DataError;
};

// Not enough data for one user (or one fit) to proceed.
class InsufficientData : public DataError {
public:
    using DataError::DataError;
};

// Zero variance or otherwise degenerate numeric input.
class DegenerateInput : public DataError {
public:
    using DataError::DataError;
};

class RankDeficient : public Error {
public:
    RankDeficient(std::string message, std::vector<std::string> columns)
        : Error(std::move(message)), columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace mobility
