#pragma once

#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "indoorloc/geometry.hpp"

namespace indoorloc {

enum class Representation { quartile, mean, powed, pca };

std::string_view to_string(Representation r);
Representation representation_from_string(std::string_view name);

// m x n matrix of raw RSSI readings, row-major. Column j holds the readings
// of ap_ids[j]; rows are successive readings.
struct SampleMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;
    std::vector<int> ap_ids;

    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    std::vector<double> column(int c) const;

    // First n columns (the dataset's AP-order prefix).
    SampleMatrix first_columns(int n) const;

    void validate() const;

    bool operator==(const SampleMatrix&) const = default;
};

struct LabeledSample {
    SampleMatrix sample;
    int rp_id = 0;   // 0 = unlabeled query

    bool operator==(const LabeledSample&) const = default;
};

struct FingerprintInstance {
    std::vector<double> attributes;
    std::optional<int> rp_label;
    Representation tag = Representation::quartile;
};

struct PowedParams {
    double floor_dbm = -100.0;
    double beta = std::numbers::e;
};

struct PcaModel {
    std::vector<double> mean_vector;               // length = input dimension
    std::vector<std::vector<double>> components;   // orthonormal rows, eigenvalue order
    std::vector<double> explained_variance;        // non-increasing

    int input_dim() const { return static_cast<int>(mean_vector.size()); }
    int component_count() const { return static_cast<int>(components.size()); }
};

// [Q1 Q2 Q3 of column 1, ..., Q1 Q2 Q3 of column n]: 3n attributes.
FingerprintInstance build_quartile_instance(const SampleMatrix& sample,
                                            std::optional<int> rp_label = std::nullopt);

// Per-column arithmetic means: n attributes.
FingerprintInstance build_mean_instance(const SampleMatrix& sample,
                                        std::optional<int> rp_label = std::nullopt);

// x -> ((x - floor)^beta) / ((-floor)^beta); lands in [0, 1] for x in [floor, 0].
// Rejects attributes below the floor, naming the index.
FingerprintInstance powed_transform(const FingerprintInstance& instance, const PowedParams& params);

// Centered sample-covariance PCA. Components are the top eigenvectors ordered
// by non-increasing eigenvalue; each is signed so its largest-magnitude entry
// is positive.
PcaModel pca_fit(std::span<const FingerprintInstance> instances, int n_components = 3);

FingerprintInstance pca_project(const PcaModel& model, const FingerprintInstance& instance);

// Labeled, class-balanced instance collection sharing one representation.
struct TrainingSet {
    std::vector<FingerprintInstance> instances;
    std::map<int, std::vector<std::size_t>> class_index;   // rp_id -> instance indices
    std::map<int, Point3> rp_coordinates;
    Representation tag = Representation::quartile;
    std::vector<int> ap_order;

    std::size_t size() const { return instances.size(); }
    int attribute_count() const;
};

// rep in {quartile, mean, powed}. Rejects class imbalance (naming the class),
// rp_ids missing from the scenario, and mismatched AP orders.
TrainingSet build_training_set(std::span<const LabeledSample> samples, const Scenario& scenario,
                               Representation rep, const PowedParams& powed = {});

TrainingSet powed_transform_set(const TrainingSet& mean_set, const PowedParams& params);
TrainingSet pca_project_set(const TrainingSet& mean_set, const PcaModel& model);

}  // namespace indoorloc
