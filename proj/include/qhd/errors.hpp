#pragma once

#include <stdexcept>
#include <string>

namespace qhd {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a closed-form expression (rho <= 0, r <= 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Equal end states where a formula needs distinct ones.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// Neither momentum branch passes the Lax test.
class NoAdmissibleBranch : public Error {
public:
    using Error::Error;
};

/// End-state evaluations of a derived constant disagree, or RH fails.
class InconsistentInput : public Error {
public:
    using Error::Error;
};

/// Mass flux constant A vanishes for distinct end states.
class ZeroMassFlux : public Error {
public:
    using Error::Error;
};

/// Bracketed search could not find (or refine) a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Point handed to the linearisation is not a rest point.
class NotEquilibrium : public Error {
public:
    using Error::Error;
};

/// A requested orbit does not exist for the given parameters.
class NoSuchOrbit : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    enum class Kind { StepUnderflow, PositivityLost, MaxSteps, NonFinite };

    IntegrationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace qhd
