#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ivfn/interval_function.hpp"

namespace ivfn {

struct Expected {
    std::string quantity;
    double value;
    std::string basis;  // how the value is obtained
};

struct Fixture {
    std::string name;
    std::string summary;
    IntervalFunction g;
    Region region;
    std::vector<Expected> expected;
    std::vector<PointConvention> permanent;
    ConventionRule convention_rule;             // empty unless a fixed convention applies
    std::optional<IntervalFunction> rebracketed;  // g(I^k) when convention_rule is set
};

/// Throws UnknownFixture.
Fixture fixture(std::string_view name);
std::vector<std::string> fixture_names();

// Point functions shared by fixtures, tests and the command line.
PointFunction identity_function();
/// sum c_k x^k
PointFunction polynomial(std::vector<double> coeffs, std::string name);
/// 0 for x <= at, 1 for x > at.
PointFunction unit_step(const Dyadic& at);
/// Linear on each [1-2^-n, 1-2^-(n+1)]: rises from 0 to 1 for even n, falls
/// from 1 to 0 for odd n.
PointFunction alternating_ramp();
/// 0 at 1/(2n), 1 at 1/(2n+1), linear in between.
PointFunction reciprocal_sawtooth();
/// Cantor staircase with `depth` levels; breakpoints are the ternary ones
/// rounded down to multiples of 2^-40.
PointFunction cantor_staircase(int depth);
/// The kept intervals of the depth-`depth` Cantor construction, same rounding.
std::vector<Span> cantor_intervals(int depth);

}  // namespace ivfn
