#include "indoorloc/locator.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace indoorloc {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::I: return "I";
        case Method::II: return "II";
        case Method::PS: return "PS";
        case Method::PCA3: return "3PCA";
    }
    return "?";
}

Method method_from_string(std::string_view name) {
    if (name == "I") return Method::I;
    if (name == "II") return Method::II;
    if (name == "PS") return Method::PS;
    if (name == "3PCA" || name == "3-PCA" || name == "PCA3") return Method::PCA3;
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected I, II, PS or 3PCA)");
}

Metric MethodConfig::metric() const {
    return method == Method::PS ? Metric::sorensen : Metric::euclidean;
}

Representation MethodConfig::query_representation() const {
    switch (method) {
        case Method::I:
        case Method::II: return Representation::quartile;
        case Method::PS: return Representation::powed;
        case Method::PCA3: return Representation::pca;
    }
    return Representation::quartile;
}

bool MethodConfig::uses_majority() const {
    return method == Method::I || method == Method::PS;
}

void MethodConfig::validate() const {
    if (k < 1) {
        throw std::invalid_argument("method config: k must be >= 1, got " + std::to_string(k));
    }
    if (n_aps < 1) {
        throw std::invalid_argument("method config: n_aps must be >= 1, got " +
                                    std::to_string(n_aps));
    }
    if (pca_components < 1) {
        throw std::invalid_argument("method config: pca_components must be >= 1");
    }
    if (method == Method::PCA3 && n_aps < pca_components) {
        throw std::invalid_argument("method config: 3PCA needs n_aps >= " +
                                    std::to_string(pca_components) + ", got " +
                                    std::to_string(n_aps));
    }
}

std::vector<Neighbor> k_nearest(const TrainingSet& training, const FingerprintInstance& query,
                                int k, Metric metric) {
    if (training.instances.empty()) {
        throw std::invalid_argument("k_nearest: empty training set");
    }
    if (k < 1 || static_cast<std::size_t>(k) > training.size()) {
        throw std::invalid_argument("k_nearest: k = " + std::to_string(k) +
                                    " outside [1, " + std::to_string(training.size()) + "]");
    }
    if (query.tag != training.tag) {
        throw std::invalid_argument(
            "k_nearest: query representation '" + std::string(to_string(query.tag)) +
            "' does not match training '" + std::string(to_string(training.tag)) + "'");
    }
    if (static_cast<int>(query.attributes.size()) != training.attribute_count()) {
        throw std::invalid_argument("k_nearest: query has " +
                                    std::to_string(query.attributes.size()) +
                                    " attributes, training has " +
                                    std::to_string(training.attribute_count()));
    }

    std::vector<Neighbor> all;
    all.reserve(training.size());
    for (std::size_t i = 0; i < training.size(); ++i) {
        const auto& inst = training.instances[i];
        all.push_back(Neighbor{i, metric_distance(metric, query.attributes, inst.attributes),
                               inst.rp_label.value_or(0)});
    }
    std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.training_index < b.training_index;
    });
    all.resize(static_cast<std::size_t>(k));
    return all;
}

MajorityPick majority_rp(std::span<const Neighbor> neighbors, const TrainingSet& training) {
    if (neighbors.empty()) {
        throw std::invalid_argument("majority_rp: no neighbors");
    }
    std::map<int, int> counts;
    for (const auto& nb : neighbors) {
        ++counts[nb.rp_label];
    }
    int best = 0;
    for (const auto& [rp, count] : counts) {
        best = std::max(best, count);
    }
    int tied = 0;
    for (const auto& [rp, count] : counts) {
        if (count == best) {
            ++tied;
        }
    }

    MajorityPick pick;
    pick.tie_broken = tied > 1;
    if (!pick.tie_broken) {
        for (const auto& [rp, count] : counts) {
            if (count == best) {
                pick.rp_id = rp;
                break;
            }
        }
    } else {
        // Neighbors are ascending by (distance, index); the first one whose RP
        // is frequency-tied is the tied RP with the nearest member.
        for (const auto& nb : neighbors) {
            if (counts[nb.rp_label] == best) {
                pick.rp_id = nb.rp_label;
                break;
            }
        }
    }
    const auto it = training.rp_coordinates.find(pick.rp_id);
    if (it == training.rp_coordinates.end()) {
        throw std::logic_error("majority_rp: rp " + std::to_string(pick.rp_id) +
                               " has no coordinates in the training set");
    }
    pick.coordinates = it->second;
    return pick;
}

Point3 weighted_centroid(std::span<const Neighbor> neighbors, const TrainingSet& training) {
    if (neighbors.empty()) {
        throw std::invalid_argument("weighted_centroid: no neighbors");
    }
    std::map<int, int> counts;
    for (const auto& nb : neighbors) {
        ++counts[nb.rp_label];
    }
    auto coords = [&](int rp_id) -> const Point3& {
        const auto it = training.rp_coordinates.find(rp_id);
        if (it == training.rp_coordinates.end()) {
            throw std::logic_error("weighted_centroid: rp " + std::to_string(rp_id) +
                                   " has no coordinates in the training set");
        }
        return it->second;
    };
    // A unanimous neighbor set returns the RP coordinates untouched.
    if (counts.size() == 1) {
        return coords(counts.begin()->first);
    }

    double wx = 0.0, wy = 0.0, wz = 0.0;
    double total = 0.0;
    for (const auto& [rp_id, count] : counts) {
        const Point3& p = coords(rp_id);
        const double w = static_cast<double>(count);
        wx += w * p.x;
        wy += w * p.y;
        wz += w * p.z;
        total += w;
    }
    return Point3{wx / total, wy / total, wz / total};
}

Localizer::Localizer(MethodConfig config, std::span<const LabeledSample> training,
                     const Scenario& scenario)
    : config_(config) {
    config_.validate();
    if (training.empty()) {
        throw std::invalid_argument("localizer: no training samples");
    }

    std::vector<LabeledSample> truncated;
    truncated.reserve(training.size());
    for (const auto& ls : training) {
        truncated.push_back(LabeledSample{ls.sample.first_columns(config_.n_aps), ls.rp_id});
    }

    switch (config_.method) {
        case Method::I:
        case Method::II:
            training_ = build_training_set(truncated, scenario, Representation::quartile);
            break;
        case Method::PS: {
            auto means = build_training_set(truncated, scenario, Representation::mean);
            training_ = powed_transform_set(means, config_.powed);
            break;
        }
        case Method::PCA3: {
            auto means = build_training_set(truncated, scenario, Representation::mean);
            pca_ = pca_fit(means.instances, config_.pca_components);
            training_ = pca_project_set(means, *pca_);
            break;
        }
    }
    if (static_cast<std::size_t>(config_.k) > training_.size()) {
        throw std::invalid_argument("localizer: k = " + std::to_string(config_.k) +
                                    " exceeds training size " + std::to_string(training_.size()));
    }
}

FingerprintInstance Localizer::make_query(const SampleMatrix& raw_sample) const {
    const SampleMatrix cut = raw_sample.first_columns(config_.n_aps);
    if (cut.ap_ids != training_.ap_order) {
        throw std::invalid_argument(
            "localizer: query AP order does not cover the training set's first " +
            std::to_string(config_.n_aps) + " APs");
    }
    switch (config_.method) {
        case Method::I:
        case Method::II: return build_quartile_instance(cut);
        case Method::PS: return powed_transform(build_mean_instance(cut), config_.powed);
        case Method::PCA3: return pca_project(*pca_, build_mean_instance(cut));
    }
    throw std::logic_error("localizer: unreachable");
}

PositionEstimate Localizer::localize(const SampleMatrix& raw_sample) const {
    return localize(raw_sample, config_.k);
}

PositionEstimate Localizer::localize(const SampleMatrix& raw_sample, int k) const {
    const FingerprintInstance query = make_query(raw_sample);
    std::vector<Neighbor> neighbors = k_nearest(training_, query, k, config_.metric());

    PositionEstimate estimate;
    estimate.config = config_;
    estimate.config.k = k;
    if (config_.uses_majority()) {
        const MajorityPick pick = majority_rp(neighbors, training_);
        estimate.coordinates = pick.coordinates;
        estimate.tie_broken = pick.tie_broken;
    } else {
        estimate.coordinates = weighted_centroid(neighbors, training_);
    }
    estimate.neighbors = std::move(neighbors);
    return estimate;
}

PositionEstimate localize(const MethodConfig& config, std::span<const LabeledSample> training,
                          const Scenario& scenario, const SampleMatrix& raw_sample) {
    return Localizer(config, training, scenario).localize(raw_sample);
}

}  // namespace indoorloc
