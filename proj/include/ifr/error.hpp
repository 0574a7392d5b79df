#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ifr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInterfaceError : public Error {
public:
    using Error::Error;
};

class InvalidResolutionError : public Error {
public:
    using Error::Error;
};

class MeshMismatchError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t pivot_index)
        : Error("zero pivot at row " + std::to_string(pivot_index)), pivot_(pivot_index) {}

    std::size_t pivot_index() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// A source or law produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

class NoRootError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_iterate)
        : Error(what), last_(last_iterate) {}

    double last_iterate() const noexcept { return last_; }

private:
    double last_;
};

class InvalidLadderError : public Error {
public:
    using Error::Error;
};

}  // namespace ifr
