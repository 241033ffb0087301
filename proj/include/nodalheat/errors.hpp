#pragma once

#include <stdexcept>
#include <string>

namespace nodalheat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class EmptyDomain : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    explicit UnknownLabel(int label)
        : Error("unknown domain label " + std::to_string(label)), label_(label) {}
    int label() const { return label_; }

private:
    int label_;
};

/// A start point that does not lie inside the requested domain.
class OutsideDomain : public Error {
public:
    using Error::Error;
};

/// The grid is too coarse for the requested geometry or time scale.
class Unresolved : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

} // namespace nodalheat
