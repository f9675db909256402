#include "rnm/errors.hpp"

namespace rnm {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::LoopEdge: return "LoopEdge";
        case ErrorCode::ParallelEdge: return "ParallelEdge";
        case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
        case ErrorCode::AlreadyDead: return "AlreadyDead";
        case ErrorCode::UnknownEdge: return "UnknownEdge";
        case ErrorCode::OddT: return "OddT";
        case ErrorCode::GenerationBudgetExceeded: return "GenerationBudgetExceeded";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::NotLatin: return "NotLatin";
        case ErrorCode::EmptyColor: return "EmptyColor";
        case ErrorCode::CompletionFailed: return "CompletionFailed";
        case ErrorCode::GreedyStuck: return "GreedyStuck";
        case ErrorCode::DenominatorNonpositive: return "DenominatorNonpositive";
        case ErrorCode::ClassBelowTarget: return "ClassBelowTarget";
        case ErrorCode::DegreeAboveCap: return "DegreeAboveCap";
        case ErrorCode::DegreeBelowTarget: return "DegreeBelowTarget";
        case ErrorCode::ADeadUnmatched: return "ADeadUnmatched";
        case ErrorCode::ReductionFailed: return "ReductionFailed";
        case ErrorCode::AugmentStuck: return "AugmentStuck";
        case ErrorCode::AFractionViolated: return "AFractionViolated";
        case ErrorCode::TargetMissed: return "TargetMissed";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::IdentityViolated: return "IdentityViolated";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace rnm
