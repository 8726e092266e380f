#pragma once

#include <span>

namespace indoorloc {

struct Quartiles {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;

    bool operator==(const Quartiles&) const = default;
};

// Quantile of an ascending-sorted sample at probability p: rank r = p * (m + 1),
// linearly interpolated between adjacent order statistics, clamped to [1, m].
// Kept as a single function so alternate conventions can be swapped in.
double rank_quantile(std::span<const double> sorted_ascending, double p);

// (Q1, Q2, Q3) of an unordered sample. Throws std::invalid_argument when empty.
Quartiles quartiles(std::span<const double> readings);

// Arithmetic mean. Throws std::invalid_argument when empty.
double mean(std::span<const double> readings);

}  // namespace indoorloc
