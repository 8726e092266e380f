#include "indoorloc/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace indoorloc {

std::string_view to_string(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "sorensen";
}

namespace {

void check_lengths(std::span<const double> u, std::span<const double> v, const char* who) {
    if (u.size() != v.size()) {
        throw std::invalid_argument(std::string(who) + ": length mismatch (" +
                                    std::to_string(u.size()) + " vs " + std::to_string(v.size()) +
                                    ")");
    }
}

}  // namespace

double euclidean(std::span<const double> u, std::span<const double> v) {
    check_lengths(u, v, "euclidean");
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double sorensen(std::span<const double> u, std::span<const double> v) {
    check_lengths(u, v, "sorensen");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < 0.0 || v[i] < 0.0) {
            throw std::invalid_argument("sorensen: negative entry at index " + std::to_string(i));
        }
        num += std::abs(u[i] - v[i]);
        den += u[i] + v[i];
    }
    if (den <= 0.0) {
        throw std::invalid_argument("sorensen: all-zero vector pair");
    }
    return num / den;
}

double metric_distance(Metric metric, std::span<const double> u, std::span<const double> v) {
    return metric == Metric::euclidean ? euclidean(u, v) : sorensen(u, v);
}

}  // namespace indoorloc
