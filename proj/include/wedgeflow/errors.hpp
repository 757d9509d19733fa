#ifndef WEDGEFLOW_ERRORS_HPP
#define WEDGEFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wedge {

// Base class for every error the library raises deliberately. Callers that
// want to distinguish "inadmissible physics" from programming mistakes catch
// the typed subclasses below.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bernoulli bracket went nonpositive: the requested state has no positive
// density (vacuum), which signals an invalid flow state rather than a bug.
class CavitationError : public Error {
public:
    using Error::Error;
};

// Generic domain violation of a scalar formula (e.g. m(u) <= 0 in the shock
// reduction, gamma <= 1).
class DomainError : public Error {
public:
    using Error::Error;
};

// Division by (u1 - u) with u >= u1.
class DivisionDomainError : public Error {
public:
    using Error::Error;
};

// A root scan found no physically admissible branch.
class NoAdmissibleRoot : public Error {
public:
    using Error::Error;
};

// Parameter continuation stalled; carries the last angle that converged.
class ContinuationBreakdown : public Error {
public:
    ContinuationBreakdown(const std::string& what, double last_good)
        : Error(what), last_good_sigma(last_good) {}
    double last_good_sigma;
};

// Circle/line system has no real intersection.
class NoIntersection : public Error {
public:
    using Error::Error;
};

// Geometric object is expressed in a frame where the requested transform is
// not defined (e.g. axis reflection outside the symmetric-wedge frame).
class FrameError : public Error {
public:
    using Error::Error;
};

class MeshQualityError : public Error {
public:
    using Error::Error;
};

class EllipticityLoss : public Error {
public:
    using Error::Error;
};

class LinearSolveFailure : public Error {
public:
    using Error::Error;
};

// Golden-section bracketing failed while locating a supremum.
class SearchFailure : public Error {
public:
    using Error::Error;
};

// No admissible barrier exponent exists; carries the real-root gap.
class ParameterInfeasible : public Error {
public:
    ParameterInfeasible(const std::string& what, double gap_) : Error(what), gap(gap_) {}
    double gap;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace wedge

#endif
