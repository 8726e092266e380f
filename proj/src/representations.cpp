#include "indoorloc/representations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "indoorloc/stats.hpp"

namespace indoorloc {

std::string_view to_string(Representation r) {
    switch (r) {
        case Representation::quartile: return "quartile";
        case Representation::mean: return "mean";
        case Representation::powed: return "powed";
        case Representation::pca: return "pca";
    }
    return "?";
}

Representation representation_from_string(std::string_view name) {
    if (name == "quartile") return Representation::quartile;
    if (name == "mean") return Representation::mean;
    if (name == "powed") return Representation::powed;
    if (name == "pca") return Representation::pca;
    throw std::invalid_argument("unknown representation '" + std::string(name) + "'");
}

std::vector<double> SampleMatrix::column(int c) const {
    if (c < 0 || c >= cols) {
        throw std::out_of_range("SampleMatrix::column: index " + std::to_string(c));
    }
    std::vector<double> out(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        out[static_cast<std::size_t>(r)] = at(r, c);
    }
    return out;
}

SampleMatrix SampleMatrix::first_columns(int n) const {
    if (n < 1 || n > cols) {
        throw std::invalid_argument("SampleMatrix::first_columns: requested " + std::to_string(n) +
                                    " columns, matrix has " + std::to_string(cols));
    }
    SampleMatrix out;
    out.rows = rows;
    out.cols = n;
    out.ap_ids.assign(ap_ids.begin(), ap_ids.begin() + n);
    out.values.resize(static_cast<std::size_t>(rows) * n);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < n; ++c) {
            out.at(r, c) = at(r, c);
        }
    }
    return out;
}

void SampleMatrix::validate() const {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("SampleMatrix: empty matrix (" + std::to_string(rows) + "x" +
                                    std::to_string(cols) + ")");
    }
    if (values.size() != static_cast<std::size_t>(rows) * cols) {
        throw std::invalid_argument("SampleMatrix: value count does not match dimensions");
    }
    if (ap_ids.size() != static_cast<std::size_t>(cols)) {
        throw std::invalid_argument("SampleMatrix: ap_ids length does not match column count");
    }
    for (std::size_t i = 0; i < ap_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ap_ids.size(); ++j) {
            if (ap_ids[i] == ap_ids[j]) {
                throw std::invalid_argument("SampleMatrix: duplicate ap_id " +
                                            std::to_string(ap_ids[i]));
            }
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("SampleMatrix: non-finite reading");
        }
    }
}

FingerprintInstance build_quartile_instance(const SampleMatrix& sample,
                                            std::optional<int> rp_label) {
    sample.validate();
    FingerprintInstance inst;
    inst.tag = Representation::quartile;
    inst.rp_label = rp_label;
    inst.attributes.reserve(static_cast<std::size_t>(sample.cols) * 3);
    for (int c = 0; c < sample.cols; ++c) {
        const auto col = sample.column(c);
        const Quartiles q = quartiles(col);
        inst.attributes.push_back(q.q1);
        inst.attributes.push_back(q.q2);
        inst.attributes.push_back(q.q3);
    }
    return inst;
}

FingerprintInstance build_mean_instance(const SampleMatrix& sample, std::optional<int> rp_label) {
    sample.validate();
    FingerprintInstance inst;
    inst.tag = Representation::mean;
    inst.rp_label = rp_label;
    inst.attributes.reserve(static_cast<std::size_t>(sample.cols));
    for (int c = 0; c < sample.cols; ++c) {
        const auto col = sample.column(c);
        inst.attributes.push_back(mean(col));
    }
    return inst;
}

FingerprintInstance powed_transform(const FingerprintInstance& instance,
                                    const PowedParams& params) {
    if (params.floor_dbm >= 0.0) {
        throw std::invalid_argument("powed_transform: floor_dbm must be negative");
    }
    const double denom = std::pow(-params.floor_dbm, params.beta);
    FingerprintInstance out;
    out.tag = Representation::powed;
    out.rp_label = instance.rp_label;
    out.attributes.reserve(instance.attributes.size());
    for (std::size_t i = 0; i < instance.attributes.size(); ++i) {
        const double x = instance.attributes[i];
        if (x < params.floor_dbm) {
            throw std::invalid_argument("powed_transform: attribute " + std::to_string(i) +
                                        " (" + std::to_string(x) + " dBm) below floor " +
                                        std::to_string(params.floor_dbm));
        }
        out.attributes.push_back(std::pow(x - params.floor_dbm, params.beta) / denom);
    }
    return out;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. A is overwritten with
// its diagonalization; V receives the eigenvectors as columns.
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v) {
    const std::size_t n = a.size();
    v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        v[i][i] = 1.0;
    }
    if (n < 2) {
        return;
    }

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            scale = std::max(scale, std::abs(a[i][j]));
        }
    }
    if (scale == 0.0) {
        return;
    }
    const double stop = 1e-14 * scale;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off = std::max(off, std::abs(a[p][q]));
            }
        }
        if (off <= stop) {
            return;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) <= stop * 1e-3) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p];
                    const double aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i];
                    const double aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v[i][p];
                    const double viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }
}

}  // namespace

PcaModel pca_fit(std::span<const FingerprintInstance> instances, int n_components) {
    if (n_components < 1) {
        throw std::invalid_argument("pca_fit: n_components must be >= 1");
    }
    if (instances.size() < 2) {
        throw std::invalid_argument("pca_fit: need at least 2 instances");
    }
    const std::size_t n = instances.front().attributes.size();
    if (static_cast<int>(n) < n_components) {
        throw std::invalid_argument("pca_fit: " + std::to_string(n) +
                                    " attributes cannot support " + std::to_string(n_components) +
                                    " components");
    }
    for (const auto& inst : instances) {
        if (inst.attributes.size() != n) {
            throw std::invalid_argument("pca_fit: inconsistent attribute counts");
        }
    }

    const double count = static_cast<double>(instances.size());
    std::vector<double> mu(n, 0.0);
    for (const auto& inst : instances) {
        for (std::size_t j = 0; j < n; ++j) {
            mu[j] += inst.attributes[j];
        }
    }
    for (double& m : mu) {
        m /= count;
    }

    // Sample covariance, m - 1 denominator.
    std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
    for (const auto& inst : instances) {
        for (std::size_t i = 0; i < n; ++i) {
            const double di = inst.attributes[i] - mu[i];
            for (std::size_t j = i; j < n; ++j) {
                cov[i][j] += di * (inst.attributes[j] - mu[j]);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cov[i][j] /= (count - 1.0);
            cov[j][i] = cov[i][j];
        }
    }

    std::vector<std::vector<double>> vectors;
    jacobi_eigen(cov, vectors);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cov[a][a] > cov[b][b]; });

    PcaModel model;
    model.mean_vector = std::move(mu);
    model.components.reserve(static_cast<std::size_t>(n_components));
    model.explained_variance.reserve(static_cast<std::size_t>(n_components));
    for (int r = 0; r < n_components; ++r) {
        const std::size_t col = order[static_cast<std::size_t>(r)];
        std::vector<double> component(n);
        for (std::size_t i = 0; i < n; ++i) {
            component[i] = vectors[i][col];
        }
        // Deterministic sign: the largest-magnitude entry is positive.
        std::size_t peak = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (std::abs(component[i]) > std::abs(component[peak])) {
                peak = i;
            }
        }
        if (component[peak] < 0.0) {
            for (double& x : component) {
                x = -x;
            }
        }
        model.components.push_back(std::move(component));
        model.explained_variance.push_back(std::max(cov[col][col], 0.0));
    }
    return model;
}

FingerprintInstance pca_project(const PcaModel& model, const FingerprintInstance& instance) {
    if (instance.attributes.size() != model.mean_vector.size()) {
        throw std::invalid_argument("pca_project: instance has " +
                                    std::to_string(instance.attributes.size()) +
                                    " attributes, model expects " +
                                    std::to_string(model.mean_vector.size()));
    }
    FingerprintInstance out;
    out.tag = Representation::pca;
    out.rp_label = instance.rp_label;
    out.attributes.reserve(model.components.size());
    for (const auto& component : model.components) {
        double dot = 0.0;
        for (std::size_t j = 0; j < component.size(); ++j) {
            dot += component[j] * (instance.attributes[j] - model.mean_vector[j]);
        }
        out.attributes.push_back(dot);
    }
    return out;
}

int TrainingSet::attribute_count() const {
    return instances.empty() ? 0 : static_cast<int>(instances.front().attributes.size());
}

TrainingSet build_training_set(std::span<const LabeledSample> samples, const Scenario& scenario,
                               Representation rep, const PowedParams& powed) {
    if (samples.empty()) {
        throw std::invalid_argument("build_training_set: no samples");
    }
    if (rep == Representation::pca) {
        throw std::invalid_argument(
            "build_training_set: pca sets require a fitted model; use pca_fit + pca_project_set");
    }

    TrainingSet set;
    set.tag = rep;
    set.ap_order = samples.front().sample.ap_ids;

    for (const auto& [sample, rp_id] : samples) {
        if (sample.ap_ids != set.ap_order) {
            throw std::invalid_argument("build_training_set: inconsistent AP order across samples");
        }
        const ReferencePoint& rp = scenario.rp_by_id(rp_id);

        FingerprintInstance inst = rep == Representation::quartile
                                       ? build_quartile_instance(sample, rp_id)
                                       : build_mean_instance(sample, rp_id);
        if (rep == Representation::powed) {
            inst = powed_transform(inst, powed);
        }
        set.class_index[rp_id].push_back(set.instances.size());
        set.instances.push_back(std::move(inst));
        set.rp_coordinates[rp_id] = rp.position;
    }

    const std::size_t per_class = set.class_index.begin()->second.size();
    for (const auto& [rp_id, indices] : set.class_index) {
        if (indices.size() != per_class) {
            throw std::invalid_argument("build_training_set: class " + std::to_string(rp_id) +
                                        " has " + std::to_string(indices.size()) +
                                        " instances, expected " + std::to_string(per_class));
        }
    }
    return set;
}

namespace {

template <typename Transform>
TrainingSet transform_set(const TrainingSet& in, Representation tag, Transform&& transform) {
    TrainingSet out;
    out.class_index = in.class_index;
    out.rp_coordinates = in.rp_coordinates;
    out.ap_order = in.ap_order;
    out.tag = tag;
    out.instances.reserve(in.instances.size());
    for (const auto& inst : in.instances) {
        out.instances.push_back(transform(inst));
    }
    return out;
}

}  // namespace

TrainingSet powed_transform_set(const TrainingSet& mean_set, const PowedParams& params) {
    return transform_set(mean_set, Representation::powed,
                         [&](const FingerprintInstance& inst) { return powed_transform(inst, params); });
}

TrainingSet pca_project_set(const TrainingSet& mean_set, const PcaModel& model) {
    return transform_set(mean_set, Representation::pca,
                         [&](const FingerprintInstance& inst) { return pca_project(model, inst); });
}

}  // namespace indoorloc
