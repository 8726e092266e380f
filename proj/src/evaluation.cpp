#include "indoorloc/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>

namespace indoorloc {

EstimateRecord make_estimate_record(const Point3& true_position,
                                    const PositionEstimate& estimate, double elapsed_s) {
    EstimateRecord rec;
    rec.true_position = true_position;
    rec.estimated_position = estimate.coordinates;
    rec.error_m = euclidean_distance(true_position, estimate.coordinates);
    rec.elapsed_s = elapsed_s;
    rec.config = estimate.config;
    return rec;
}

double mean_error(std::span<const EstimateRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("mean_error: no records");
    }
    double sum = 0.0;
    for (const auto& rec : records) {
        sum += rec.error_m;
    }
    return sum / static_cast<double>(records.size());
}

double mean_time(std::span<const EstimateRecord> records) {
    if (records.empty()) {
        throw std::invalid_argument("mean_time: no records");
    }
    double sum = 0.0;
    for (const auto& rec : records) {
        sum += rec.elapsed_s;
    }
    return sum / static_cast<double>(records.size());
}

std::vector<CdfPoint> error_cdf(std::span<const double> errors) {
    if (errors.empty()) {
        throw std::invalid_argument("error_cdf: no errors");
    }
    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());

    const double total = static_cast<double>(sorted.size());
    std::vector<CdfPoint> points;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        points.push_back(CdfPoint{sorted[i], static_cast<double>(j) / total});
        i = j;
    }
    return points;
}

namespace {

struct Treatment {
    std::size_t n_index = 0;
    std::size_t k_index = 0;
    int n_aps = 0;
    int k = 0;
};

// Shared fixture: one localizer per n value plus the flattened treatment list.
struct GridPlan {
    std::vector<int> n_values;
    std::vector<int> k_values;
    std::vector<Treatment> treatments;
};

GridPlan plan_grid(const GridSpec& spec, std::span<const LabeledSample> train,
                   std::span<const LabeledSample> test) {
    if (train.empty() || test.empty()) {
        throw std::invalid_argument("treatment_grid: empty train or test dataset");
    }
    if (train.front().sample.ap_ids != test.front().sample.ap_ids) {
        throw std::invalid_argument("treatment_grid: train and test AP orders differ");
    }
    if (spec.n_values.empty() || spec.k_values.empty()) {
        throw std::invalid_argument("treatment_grid: empty n or k range");
    }

    GridPlan plan;
    for (int n : spec.n_values) {
        // 3-PCA cannot run below its component count.
        if (spec.method == Method::PCA3 && n < spec.pca_components) {
            continue;
        }
        plan.n_values.push_back(n);
    }
    if (plan.n_values.empty()) {
        throw std::invalid_argument("treatment_grid: no usable n values for method " +
                                    std::string(to_string(spec.method)));
    }
    plan.k_values = spec.k_values;
    for (std::size_t ni = 0; ni < plan.n_values.size(); ++ni) {
        for (std::size_t ki = 0; ki < plan.k_values.size(); ++ki) {
            plan.treatments.push_back(
                Treatment{ni, ki, plan.n_values[ni], plan.k_values[ki]});
        }
    }
    return plan;
}

MethodConfig base_config(const GridSpec& spec, int n_aps) {
    MethodConfig config;
    config.method = spec.method;
    config.k = 1;   // per-treatment k is passed at call time
    config.n_aps = n_aps;
    config.powed = spec.powed;
    config.pca_components = spec.pca_components;
    return config;
}

TreatmentOutcome run_treatment(const Localizer& localizer, int k,
                               std::span<const LabeledSample> test, const Scenario& scenario) {
    double error_sum = 0.0;
    double time_sum = 0.0;
    for (const auto& ls : test) {
        const Point3 truth = scenario.rp_by_id(ls.rp_id).position;
        const auto t0 = std::chrono::steady_clock::now();
        const PositionEstimate estimate = localizer.localize(ls.sample, k);
        const auto t1 = std::chrono::steady_clock::now();
        error_sum += euclidean_distance(truth, estimate.coordinates);
        time_sum += std::chrono::duration<double>(t1 - t0).count();
    }
    TreatmentOutcome outcome;
    outcome.result.n_aps = localizer.config().n_aps;
    outcome.result.k = k;
    outcome.result.estimate_count = test.size();
    outcome.result.mean_error_m = error_sum / static_cast<double>(test.size());
    outcome.mean_time_s = time_sum / static_cast<double>(test.size());
    return outcome;
}

}  // namespace

std::vector<TreatmentOutcome> treatment_grid_serial(const GridSpec& spec,
                                                    std::span<const LabeledSample> train,
                                                    std::span<const LabeledSample> test,
                                                    const Scenario& scenario) {
    const GridPlan plan = plan_grid(spec, train, test);

    std::vector<std::unique_ptr<Localizer>> by_n;
    by_n.reserve(plan.n_values.size());
    for (int n : plan.n_values) {
        by_n.push_back(std::make_unique<Localizer>(base_config(spec, n), train, scenario));
    }

    std::vector<TreatmentOutcome> out;
    out.reserve(plan.treatments.size());
    for (const auto& t : plan.treatments) {
        out.push_back(run_treatment(*by_n[t.n_index], t.k, test, scenario));
    }
    return out;
}

std::vector<TreatmentOutcome> treatment_grid(const GridSpec& spec,
                                             std::span<const LabeledSample> train,
                                             std::span<const LabeledSample> test,
                                             const Scenario& scenario) {
    const GridPlan plan = plan_grid(spec, train, test);
    const int n_count = static_cast<int>(plan.n_values.size());
    const int t_count = static_cast<int>(plan.treatments.size());

    // Exceptions must not escape the parallel regions; capture and rethrow the
    // first one in deterministic order.
    std::vector<std::string> errors(static_cast<std::size_t>(n_count + t_count));
    auto rethrow_first = [&errors]() {
        for (const auto& msg : errors) {
            if (!msg.empty()) {
                throw std::runtime_error(msg);
            }
        }
    };

    std::vector<std::unique_ptr<Localizer>> by_n(static_cast<std::size_t>(n_count));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_count; ++i) {
        try {
            by_n[static_cast<std::size_t>(i)] = std::make_unique<Localizer>(
                base_config(spec, plan.n_values[static_cast<std::size_t>(i)]), train, scenario);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    rethrow_first();

    std::vector<TreatmentOutcome> out(static_cast<std::size_t>(t_count));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < t_count; ++i) {
        const auto& t = plan.treatments[static_cast<std::size_t>(i)];
        try {
            out[static_cast<std::size_t>(i)] = run_treatment(*by_n[t.n_index], t.k, test, scenario);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(n_count + i)] = e.what();
        }
    }
    rethrow_first();
    return out;
}

std::vector<MSweepRow> m_sweep(const Scenario& scenario, const LogNormalParams& params,
                               std::span<const int> m_values, const MethodConfig& config,
                               int instances_per_rp, std::uint64_t seed) {
    if (m_values.empty()) {
        throw std::invalid_argument("m_sweep: no m values");
    }
    config.validate();

    std::vector<MSweepRow> rows;
    rows.reserve(m_values.size());
    for (int m : m_values) {
        GenerationSpec gen;
        gen.scenario = scenario;
        gen.params = params;
        gen.readings_per_sample = m;
        gen.instances_per_rp = instances_per_rp;

        gen.seed = derive_stream_seed(seed, 2 * static_cast<std::uint64_t>(m));
        const auto train = generate_dataset(gen);
        gen.seed = derive_stream_seed(seed, 2 * static_cast<std::uint64_t>(m) + 1);
        const auto test = generate_dataset(gen);

        const Localizer localizer(config, train, scenario);
        const TreatmentOutcome outcome = run_treatment(localizer, config.k, test, scenario);
        rows.push_back(MSweepRow{m, outcome.result.mean_error_m, outcome.mean_time_s});
    }
    return rows;
}

}  // namespace indoorloc
