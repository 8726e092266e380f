#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "indoorloc/geometry.hpp"
#include "indoorloc/metrics.hpp"
#include "indoorloc/representations.hpp"

namespace indoorloc {

enum class Method { I, II, PS, PCA3 };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);   // "I", "II", "PS", "3PCA"

struct MethodConfig {
    Method method = Method::I;
    int k = 1;
    int n_aps = 8;
    PowedParams powed;
    int pca_components = 3;

    Metric metric() const;                         // sorensen for PS, euclidean otherwise
    Representation query_representation() const;   // quartile / powed / pca
    bool uses_majority() const;                    // I and PS; II and 3-PCA use the centroid
    void validate() const;
};

struct Neighbor {
    std::size_t training_index = 0;
    double distance = 0.0;
    int rp_label = 0;
};

struct PositionEstimate {
    Point3 coordinates;
    MethodConfig config;
    std::vector<Neighbor> neighbors;   // ascending (distance, training_index)
    bool tie_broken = false;
};

// The k smallest distances, ascending; equal distances ordered by training
// index so results are reproducible.
std::vector<Neighbor> k_nearest(const TrainingSet& training, const FingerprintInstance& query,
                                int k, Metric metric);

struct MajorityPick {
    int rp_id = 0;
    Point3 coordinates;
    bool tie_broken = false;
};

// Coordinates of the most frequent RP among the neighbors. A frequency tie
// goes to the tied RP whose closest member is nearest overall.
MajorityPick majority_rp(std::span<const Neighbor> neighbors, const TrainingSet& training);

// Occurrence-weighted mean of the neighbors' RP coordinates. Exact (no
// averaging) when all neighbors share one RP.
Point3 weighted_centroid(std::span<const Neighbor> neighbors, const TrainingSet& training);

// One method pipeline bound to a training dataset. The representation-specific
// training set, and the PCA model for 3-PCA, are built once at construction;
// localize() is const and safe to call concurrently.
class Localizer {
public:
    Localizer(MethodConfig config, std::span<const LabeledSample> training,
              const Scenario& scenario);

    PositionEstimate localize(const SampleMatrix& raw_sample) const;
    PositionEstimate localize(const SampleMatrix& raw_sample, int k) const;

    const TrainingSet& training_set() const { return training_; }
    const MethodConfig& config() const { return config_; }
    const PcaModel* pca_model() const { return pca_ ? &*pca_ : nullptr; }

private:
    FingerprintInstance make_query(const SampleMatrix& raw_sample) const;

    MethodConfig config_;
    TrainingSet training_;
    std::optional<PcaModel> pca_;
};

// One-shot convenience: builds a Localizer and runs a single estimate.
PositionEstimate localize(const MethodConfig& config, std::span<const LabeledSample> training,
                          const Scenario& scenario, const SampleMatrix& raw_sample);

}  // namespace indoorloc
