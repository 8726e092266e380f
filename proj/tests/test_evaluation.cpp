#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "indoorloc/evaluation.hpp"

using namespace indoorloc;

namespace {

MethodConfig make_config(Method method, int k, int n_aps) {
    MethodConfig config;
    config.method = method;
    config.k = k;
    config.n_aps = n_aps;
    return config;
}

EstimateRecord record_with_error(double error) {
    EstimateRecord rec;
    rec.true_position = Point3{0, 0, 0};
    rec.estimated_position = Point3{error, 0, 0};
    rec.error_m = error;
    return rec;
}

GenerationSpec paper_spec(std::uint64_t seed, double sigma) {
    GenerationSpec spec;
    spec.scenario = default_scenario();
    spec.params.shadowing_sigma_db = sigma;
    spec.readings_per_sample = 20;
    spec.instances_per_rp = 10;
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("mean_error basics and oracle") {
    EstimateRecord perfect;
    perfect.true_position = Point3{1, 2, 0.8};
    perfect.estimated_position = perfect.true_position;
    CHECK(mean_error(std::vector<EstimateRecord>{perfect}) == 0.0);

    const std::vector<EstimateRecord> two = {record_with_error(1.0), record_with_error(3.0)};
    CHECK(mean_error(two) == 2.0);

    std::mt19937 rng(71);
    std::uniform_real_distribution<double> err(0.0, 4.0);
    std::vector<EstimateRecord> records;
    long double oracle = 0.0L;
    for (int i = 0; i < 160; ++i) {
        const double e = err(rng);
        records.push_back(record_with_error(e));
        oracle += e;
    }
    CHECK(mean_error(records) ==
          doctest::Approx(static_cast<double>(oracle / 160.0L)).epsilon(1e-12));

    CHECK_THROWS_AS(mean_error({}), std::invalid_argument);
}

TEST_CASE("mean_error of a concatenation is the weighted average") {
    std::mt19937 rng(72);
    std::uniform_real_distribution<double> err(0.0, 2.0);
    std::vector<EstimateRecord> a, b;
    for (int i = 0; i < 37; ++i) a.push_back(record_with_error(err(rng)));
    for (int i = 0; i < 91; ++i) b.push_back(record_with_error(err(rng)));

    std::vector<EstimateRecord> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double expected =
        (mean_error(a) * 37.0 + mean_error(b) * 91.0) / 128.0;
    CHECK(mean_error(both) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("make_estimate_record pins the error to the distance") {
    PositionEstimate est;
    est.coordinates = Point3{1.0, 2.0, 0.5};
    const Point3 truth{0.5, 1.0, 0.5};
    const EstimateRecord rec = make_estimate_record(truth, est, 0.001);
    CHECK(rec.error_m == euclidean_distance(truth, est.coordinates));
    CHECK(rec.elapsed_s == 0.001);
}

TEST_CASE("mean_time basics") {
    EstimateRecord a = record_with_error(0.0);
    a.elapsed_s = 0.5;
    CHECK(mean_time(std::vector<EstimateRecord>{a}) == 0.5);
    EstimateRecord b = record_with_error(0.0);
    b.elapsed_s = 0.2;
    EstimateRecord c = record_with_error(0.0);
    c.elapsed_s = 0.4;
    CHECK(mean_time(std::vector<EstimateRecord>{b, c}) ==
          doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(mean_time({}), std::invalid_argument);
}

TEST_CASE("error_cdf counts steps") {
    const auto zeros = error_cdf(std::vector<double>{0.0, 0.0, 0.0});
    REQUIRE(zeros.size() == 1);
    CHECK(zeros[0].threshold_m == 0.0);
    CHECK(zeros[0].cumulative_fraction == 1.0);

    const auto steps = error_cdf(std::vector<double>{1.0, 2.0, 2.0, 4.0});
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].threshold_m == 1.0);
    CHECK(steps[0].cumulative_fraction == 0.25);
    CHECK(steps[1].threshold_m == 2.0);
    CHECK(steps[1].cumulative_fraction == 0.75);
    CHECK(steps[2].threshold_m == 4.0);
    CHECK(steps[2].cumulative_fraction == 1.0);

    CHECK_THROWS_AS(error_cdf({}), std::invalid_argument);
}

TEST_CASE("error_cdf is monotone and ends at exactly one") {
    std::mt19937 rng(73);
    std::uniform_real_distribution<double> err(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> errors(120);
        for (double& e : errors) e = err(rng);
        errors[17] = errors[3];   // force duplicates
        const auto cdf = error_cdf(errors);
        for (std::size_t i = 1; i < cdf.size(); ++i) {
            CHECK(cdf[i - 1].threshold_m < cdf[i].threshold_m);
            CHECK(cdf[i - 1].cumulative_fraction <= cdf[i].cumulative_fraction);
        }
        CHECK(cdf.back().cumulative_fraction == 1.0);
        CHECK(cdf.back().threshold_m == *std::max_element(errors.begin(), errors.end()));
    }
}

TEST_CASE("treatment grid shape and noiseless null error") {
    const auto train = generate_dataset(paper_spec(81, 0.0));
    const auto test = generate_dataset(paper_spec(82, 0.0));
    const Scenario scenario = default_scenario();

    GridSpec spec;
    spec.method = Method::I;
    const auto outcomes = treatment_grid(spec, train, test, scenario);
    REQUIRE(outcomes.size() == 49);
    for (const auto& o : outcomes) {
        CHECK(o.result.estimate_count == 160);
        CHECK(o.result.mean_error_m == 0.0);   // noiseless replay
    }
    CHECK(outcomes.front().result.n_aps == 2);
    CHECK(outcomes.front().result.k == 1);
    CHECK(outcomes.back().result.n_aps == 8);
    CHECK(outcomes.back().result.k == 13);

    spec.method = Method::PCA3;
    const auto pca = treatment_grid(spec, train, test, scenario);
    CHECK(pca.size() == 42);
    CHECK(pca.front().result.n_aps == 3);
}

TEST_CASE("methods I and II share k = 1 grid rows") {
    const auto train = generate_dataset(paper_spec(83, 3.0));
    const auto test = generate_dataset(paper_spec(84, 3.0));
    const Scenario scenario = default_scenario();

    GridSpec spec;
    spec.method = Method::I;
    const auto one = treatment_grid(spec, train, test, scenario);
    spec.method = Method::II;
    const auto two = treatment_grid(spec, train, test, scenario);
    REQUIRE(one.size() == two.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        if (one[i].result.k == 1) {
            CHECK(one[i].result.mean_error_m == two[i].result.mean_error_m);
        }
    }
}

TEST_CASE("treatment grid is deterministic across runs") {
    const auto train = generate_dataset(paper_spec(85, 3.0));
    const auto test = generate_dataset(paper_spec(86, 3.0));
    const Scenario scenario = default_scenario();

    GridSpec spec;
    spec.method = Method::PS;
    const auto a = treatment_grid(spec, train, test, scenario);
    const auto b = treatment_grid(spec, train, test, scenario);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].result.n_aps == b[i].result.n_aps);
        CHECK(a[i].result.k == b[i].result.k);
        CHECK(a[i].result.mean_error_m == b[i].result.mean_error_m);
        CHECK(a[i].result.estimate_count == b[i].result.estimate_count);
    }
}

TEST_CASE("treatment grid rejects incompatible datasets") {
    const auto train = generate_dataset(paper_spec(87, 0.0));
    auto test = generate_dataset(paper_spec(88, 0.0));
    std::swap(test.front().sample.ap_ids[0], test.front().sample.ap_ids[1]);
    for (auto& ls : test) {
        ls.sample.ap_ids = test.front().sample.ap_ids;
    }
    GridSpec spec;
    CHECK_THROWS_AS(treatment_grid(spec, train, test, default_scenario()),
                    std::invalid_argument);
    CHECK_THROWS_AS(treatment_grid_serial(spec, train, test, default_scenario()),
                    std::invalid_argument);
    CHECK_THROWS_AS(treatment_grid(spec, {}, test, default_scenario()), std::invalid_argument);
}

TEST_CASE("m-sweep shape and noiseless null error") {
    const Scenario scenario = default_scenario();
    LogNormalParams params;
    params.shadowing_sigma_db = 0.0;
    const std::vector<int> m_values = {5, 10, 15, 20};
    const MethodConfig config = make_config(Method::I, 1, 4);

    const auto rows = m_sweep(scenario, params, m_values, config, 10, 11);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].m == m_values[i]);
        CHECK(rows[i].mean_error_m == 0.0);
        CHECK(rows[i].mean_time_s >= 0.0);
    }
    CHECK_THROWS_AS(m_sweep(scenario, params, {}, config, 10, 11), std::invalid_argument);
}
