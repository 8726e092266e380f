// The OpenMP kernels must reproduce the serial reference implementations
// bit for bit.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "indoorloc/evaluation.hpp"
#include "indoorloc/propagation.hpp"

using namespace indoorloc;

namespace {

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

TEST_CASE("parallel generation equals the serial reference") {
    for (std::uint64_t seed : {1ULL, 77ULL, 123456789ULL}) {
        const auto spec = paper_spec(seed, 3.0);
        CHECK(generate_dataset(spec) == generate_dataset_serial(spec));
    }
}

TEST_CASE("parallel grid equals the serial reference") {
    const auto train = generate_dataset(paper_spec(201, 3.0));
    const auto test = generate_dataset(paper_spec(202, 3.0));
    const Scenario scenario = default_scenario();

    for (Method method : {Method::I, Method::II, Method::PS, Method::PCA3}) {
        GridSpec spec;
        spec.method = method;
        const auto parallel = treatment_grid(spec, train, test, scenario);
        const auto serial = treatment_grid_serial(spec, train, test, scenario);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < parallel.size(); ++i) {
            CHECK(parallel[i].result.n_aps == serial[i].result.n_aps);
            CHECK(parallel[i].result.k == serial[i].result.k);
            CHECK(parallel[i].result.mean_error_m == serial[i].result.mean_error_m);
            CHECK(parallel[i].result.estimate_count == serial[i].result.estimate_count);
        }
    }
}
