#pragma once

#include "ivfn/integrator.hpp"
#include "ivfn/measurable_set.hpp"

namespace ivfn {

enum class AroundPart {
    meeting,  // g_E: g(I) when I meets E, else 0
    avoiding  // g^E = g - g_E
};

/// Meeting is bracket-sensitive: (0,1] does not meet {0}.
IntervalFunction around_kernel(const IntervalFunction& g, const MeasurableSet& e, AroundPart part);

LimitReport around_limits(const IntervalFunction& g, const MeasurableSet& e, const Region& region,
                          const SearchConfig& cfg, AroundPart part = AroundPart::meeting);

struct AroundChainLevel {
    Dyadic e;
    double lower = 0.0;           // direct lower around E
    double iterated_lower = 0.0;  // lower around E of the inner lower limits
    double iterated_upper = 0.0;
    double upper = 0.0;
};

struct AroundChain {
    std::vector<AroundChainLevel> levels;
    bool holds = true;
    bool strict_somewhere = false;
};

/// Inner limits over an interval I use norm bounds m(I)/8 and m(I)/16.
/// Divisions built by concatenating inner witnesses join the direct family,
/// so the outer terms bound the iterated ones.
AroundChain around_chain_check(const IntervalFunction& g, const MeasurableSet& e, const Region& region,
                               const SearchConfig& cfg);

}  // namespace ivfn
