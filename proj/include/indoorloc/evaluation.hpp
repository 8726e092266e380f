#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "indoorloc/locator.hpp"
#include "indoorloc/propagation.hpp"

namespace indoorloc {

struct EstimateRecord {
    Point3 true_position;
    Point3 estimated_position;
    double error_m = 0.0;
    double elapsed_s = 0.0;   // instance construction + classification only
    MethodConfig config;
};

EstimateRecord make_estimate_record(const Point3& true_position,
                                    const PositionEstimate& estimate, double elapsed_s);

double mean_error(std::span<const EstimateRecord> records);
double mean_time(std::span<const EstimateRecord> records);

struct CdfPoint {
    double threshold_m = 0.0;
    double cumulative_fraction = 0.0;
};

// Empirical CDF as sorted step points; the final fraction is exactly 1.
std::vector<CdfPoint> error_cdf(std::span<const double> errors);

struct TreatmentResult {
    int n_aps = 0;
    int k = 0;
    double mean_error_m = 0.0;
    std::size_t estimate_count = 0;
};

struct TreatmentOutcome {
    TreatmentResult result;
    double mean_time_s = 0.0;   // wall clock; never part of determinism checks
};

struct GridSpec {
    Method method = Method::I;
    std::vector<int> n_values = {2, 3, 4, 5, 6, 7, 8};
    std::vector<int> k_values = {1, 3, 5, 7, 9, 11, 13};
    PowedParams powed;
    int pca_components = 3;
};

// The full (n, k) sweep over both datasets. 3-PCA drops n below the component
// count (42 treatments instead of 49 at the defaults). Output order is
// (n ascending, k ascending) regardless of worker scheduling.
std::vector<TreatmentOutcome> treatment_grid(const GridSpec& spec,
                                             std::span<const LabeledSample> train,
                                             std::span<const LabeledSample> test,
                                             const Scenario& scenario);            // OpenMP
std::vector<TreatmentOutcome> treatment_grid_serial(const GridSpec& spec,
                                                    std::span<const LabeledSample> train,
                                                    std::span<const LabeledSample> test,
                                                    const Scenario& scenario);     // reference

struct MSweepRow {
    int m = 0;
    double mean_error_m = 0.0;
    double mean_time_s = 0.0;
};

// Regenerates train/test datasets for each m (sub-seeds 2m / 2m+1 of `seed`)
// and evaluates the fixed config on each pair.
std::vector<MSweepRow> m_sweep(const Scenario& scenario, const LogNormalParams& params,
                               std::span<const int> m_values, const MethodConfig& config,
                               int instances_per_rp, std::uint64_t seed);

}  // namespace indoorloc
