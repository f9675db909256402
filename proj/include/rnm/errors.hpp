#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rnm {

enum class ErrorCode {
    LoopEdge,
    ParallelEdge,
    VertexOutOfRange,
    AlreadyDead,
    UnknownEdge,
    OddT,
    GenerationBudgetExceeded,
    BudgetExceeded,
    NotLatin,
    EmptyColor,
    CompletionFailed,
    GreedyStuck,
    DenominatorNonpositive,
    ClassBelowTarget,
    DegreeAboveCap,
    DegreeBelowTarget,
    ADeadUnmatched,
    ReductionFailed,
    AugmentStuck,
    AFractionViolated,
    TargetMissed,
    OutOfDomain,
    IdentityViolated,
    ConfigInvalid,
    ParseError,
    InvariantViolation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace rnm
