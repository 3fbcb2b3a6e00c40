#pragma once

#include <cmath>
#include <string>

#include "passk/errors.hpp"

namespace passk {

// A checked probability value. Construction rejects anything outside [0, 1]
// beyond a small rounding slack; values within the slack are snapped to the
// boundary so downstream comparisons stay exact at 0 and 1.
class Probability {
public:
    Probability() = default;

    Probability(double v) {
        constexpr double slack = 1e-12;
        if (!(v >= -slack && v <= 1.0 + slack) || std::isnan(v)) {
            throw domain_error("probability out of range: " + std::to_string(v));
        }
        value_ = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }

    operator double() const { return value_; }
    double value() const { return value_; }

private:
    double value_ = 0.0;
};

}  // namespace passk
