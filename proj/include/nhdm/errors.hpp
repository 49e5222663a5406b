#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nhdm {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, double abs_det)
        : Error(what), abs_det_(abs_det) {}
    double abs_det() const { return abs_det_; }

private:
    double abs_det_;
};

class DefectiveMatrixError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PropertyPIError : public Error {
public:
    using Error::Error;
};

class SpanError : public Error {
public:
    SpanError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class IntertwiningViolation : public Error {
public:
    IntertwiningViolation(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class NotPSDError : public Error {
public:
    NotPSDError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

class TraceNotOneError : public Error {
public:
    TraceNotOneError(const std::string& what, double trace)
        : Error(what), trace_(trace) {}
    double trace() const { return trace_; }

private:
    double trace_;
};

class RMismatchError : public Error {
public:
    using Error::Error;
};

class ExceptionalPointError : public Error {
public:
    ExceptionalPointError(const std::string& what, std::complex<double> mu)
        : Error(what), mu_(mu) {}
    std::complex<double> coalesced_eigenvalue() const { return mu_; }

private:
    std::complex<double> mu_;
};

class OutOfRegionError : public Error {
public:
    using Error::Error;
};

class ComplexSpectrumError : public Error {
public:
    using Error::Error;
};

class BrokenRegionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace nhdm
