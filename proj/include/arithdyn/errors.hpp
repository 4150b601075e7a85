#pragma once

#include <stdexcept>
#include <string>

namespace arithdyn {

// Every library error carries a stable code usable by the CLI for diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define ARITHDYN_ERROR(NAME)                                        \
    class NAME : public Error {                                     \
    public:                                                         \
        explicit NAME(const std::string& what) : Error(#NAME, what) {} \
    }

ARITHDYN_ERROR(AllZero);
ARITHDYN_ERROR(EmptySample);
ARITHDYN_ERROR(DimensionMismatch);
ARITHDYN_ERROR(NotRealizable);
ARITHDYN_ERROR(NegativeE);
ARITHDYN_ERROR(DomainMismatch);
ARITHDYN_ERROR(CompositionOverflow);
ARITHDYN_ERROR(Unavailable);
ARITHDYN_ERROR(OffCurve);
ARITHDYN_ERROR(DegenerateKernel);
ARITHDYN_ERROR(TooShort);
ARITHDYN_ERROR(NonGrowing);
ARITHDYN_ERROR(DeltaNotExpanding);
ARITHDYN_ERROR(NoDefectBound);
ARITHDYN_ERROR(InsufficientPoints);
ARITHDYN_ERROR(BudgetExhausted);
ARITHDYN_ERROR(NoQualifyingPoints);
ARITHDYN_ERROR(ConfigError);
ARITHDYN_ERROR(ParseError);

#undef ARITHDYN_ERROR

} // namespace arithdyn
