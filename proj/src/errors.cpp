#include "kwgraph/errors.hpp"

namespace kwg {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::DuplicateVertex: return "DuplicateVertex";
        case ErrorCode::UnknownVertex: return "UnknownVertex";
        case ErrorCode::NonPositiveMeasure: return "NonPositiveMeasure";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::SingleVertex: return "SingleVertex";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::InvalidExponent: return "InvalidExponent";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::HypothesesViolated: return "HypothesesViolated";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::IncompatibleRHS: return "IncompatibleRHS";
        case ErrorCode::SingularSolveFailure: return "SingularSolveFailure";
        case ErrorCode::PreconditionViolated: return "PreconditionViolated";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::SearchFailure: return "SearchFailure";
        case ErrorCode::NotAnOrderedPair: return "NotAnOrderedPair";
        case ErrorCode::NotALowerSolution: return "NotALowerSolution";
        case ErrorCode::NotAnUpperSolution: return "NotAnUpperSolution";
        case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
        case ErrorCode::ContinuationStalled: return "ContinuationStalled";
        case ErrorCode::CertifiedInfeasible: return "CertifiedInfeasible";
        case ErrorCode::EndpointSearchFailure: return "EndpointSearchFailure";
        case ErrorCode::DeformationStalled: return "DeformationStalled";
        case ErrorCode::CollapsedToMinimum: return "CollapsedToMinimum";
        case ErrorCode::NotTwoVertices: return "NotTwoVertices";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

}  // namespace kwg
