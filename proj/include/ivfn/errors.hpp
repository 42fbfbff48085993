#pragma once

#include <stdexcept>
#include <string>

namespace ivfn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define IVFN_ERROR(Name)                                   \
    class Name : public Error {                            \
    public:                                                \
        explicit Name(const std::string& what) : Error(what) {} \
    }

IVFN_ERROR(DegenerateInterval);
IVFN_ERROR(PointOutsideRegion);
IVFN_ERROR(UnsortedPoints);
IVFN_ERROR(NotContained);
IVFN_ERROR(ArithmeticOverflow);
IVFN_ERROR(ParseError);
IVFN_ERROR(UnknownFixture);
IVFN_ERROR(IndeterminateForm);
IVFN_ERROR(BudgetExceeded);
IVFN_ERROR(BracketDependent);
IVFN_ERROR(NoConvergence);
IVFN_ERROR(StageTooLarge);
IVFN_ERROR(ZeroMeasureSet);
IVFN_ERROR(UnsupportedFormat);

#undef IVFN_ERROR

}  // namespace ivfn
