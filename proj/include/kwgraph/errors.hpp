#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kwg {

enum class ErrorCode {
    // graph construction
    EmptyInput,
    DuplicateVertex,
    UnknownVertex,
    NonPositiveMeasure,
    NonPositiveWeight,
    DuplicateEdge,
    SelfLoop,
    Disconnected,
    SingleVertex,
    // operators
    DomainMismatch,
    NonFiniteValue,
    InvalidExponent,
    Overflow,
    // problem data
    HypothesesViolated,
    InvalidConfig,
    // solvers
    IncompatibleRHS,
    SingularSolveFailure,
    PreconditionViolated,
    ConvergenceFailure,
    SearchFailure,
    NotAnOrderedPair,
    NotALowerSolution,
    NotAnUpperSolution,
    MonotonicityViolation,
    ContinuationStalled,
    CertifiedInfeasible,
    EndpointSearchFailure,
    DeformationStalled,
    CollapsedToMinimum,
    // oracle
    NotTwoVertices,
    // io
    ParseError,
    ValidationError,
};

std::string_view to_string(ErrorCode code);

class KwError : public std::runtime_error {
public:
    KwError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace kwg
