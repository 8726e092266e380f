#include "indoorloc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace indoorloc {

double rank_quantile(std::span<const double> sorted_ascending, double p) {
    if (sorted_ascending.empty()) {
        throw std::invalid_argument("rank_quantile: empty sample");
    }
    const auto m = sorted_ascending.size();
    double rank = p * static_cast<double>(m + 1);
    rank = std::clamp(rank, 1.0, static_cast<double>(m));

    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const double frac = rank - static_cast<double>(lo);
    const double lower = sorted_ascending[lo - 1];
    if (frac == 0.0 || lo == m) {
        return lower;
    }
    return lower + frac * (sorted_ascending[lo] - lower);
}

Quartiles quartiles(std::span<const double> readings) {
    if (readings.empty()) {
        throw std::invalid_argument("quartiles: empty sample");
    }
    std::vector<double> sorted(readings.begin(), readings.end());
    std::sort(sorted.begin(), sorted.end());
    return Quartiles{rank_quantile(sorted, 0.25), rank_quantile(sorted, 0.50),
                     rank_quantile(sorted, 0.75)};
}

double mean(std::span<const double> readings) {
    if (readings.empty()) {
        throw std::invalid_argument("mean: empty sample");
    }
    double sum = 0.0;
    for (double v : readings) {
        sum += v;
    }
    return sum / static_cast<double>(readings.size());
}

}  // namespace indoorloc
