#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace memkern {

// Base for every failure raised by the library. Callers that need totality
// (the objective, the optimizer) catch this type and nothing broader.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    PoleError(double t, double magnitude)
        : Error("Pade denominator too small at t=" + std::to_string(t) +
                " (|den|=" + std::to_string(magnitude) + ")"),
          t_(t) {}
    double where() const noexcept { return t_; }

private:
    double t_;
};

class AllEigenvaluesNonpositive : public Error {
public:
    AllEigenvaluesNonpositive() : Error("PSD projection: no positive eigenvalue to renormalise") {}
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t expected, std::size_t got)
        : Error("parameter vector length " + std::to_string(got) + ", expected " +
                std::to_string(expected)) {}
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class TooFewSamples : public Error {
public:
    TooFewSamples() : Error("trapezoid rule needs at least two samples") {}
};

class SingularStepMatrix : public Error {
public:
    explicit SingularStepMatrix(std::size_t step)
        : Error("Crank-Nicolson step matrix is singular at step " + std::to_string(step)),
          step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class NonFiniteState : public Error {
public:
    explicit NonFiniteState(std::size_t step)
        : Error("state became non-finite at step " + std::to_string(step)), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class NonFiniteGradient : public Error {
public:
    explicit NonFiniteGradient(std::size_t component)
        : Error("finite-difference probe hit the guard value in component " +
                std::to_string(component)) {}
};

class AllStartsFailed : public Error {
public:
    AllStartsFailed() : Error("every optimizer start returned the guard value") {}
};

}  // namespace memkern
