#pragma once

#include <span>
#include <string_view>

namespace indoorloc {

enum class Metric { euclidean, sorensen };

std::string_view to_string(Metric m);

// sqrt(sum (u_i - v_i)^2). Throws std::invalid_argument on length mismatch.
double euclidean(std::span<const double> u, std::span<const double> v);

// Sorensen (Bray-Curtis) dissimilarity: sum|u_i - v_i| / sum(u_i + v_i).
// Entries must be non-negative and the denominator positive.
double sorensen(std::span<const double> u, std::span<const double> v);

double metric_distance(Metric metric, std::span<const double> u, std::span<const double> v);

}  // namespace indoorloc
