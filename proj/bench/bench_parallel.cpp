// Compares the OpenMP kernels against their serial reference implementations
// and checks that both produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "indoorloc/evaluation.hpp"
#include "indoorloc/geometry.hpp"
#include "indoorloc/propagation.hpp"

using namespace indoorloc;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_results(const std::vector<TreatmentOutcome>& a, const std::vector<TreatmentOutcome>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].result.n_aps != b[i].result.n_aps || a[i].result.k != b[i].result.k ||
            a[i].result.mean_error_m != b[i].result.mean_error_m ||
            a[i].result.estimate_count != b[i].result.estimate_count) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    int instances_per_rp = 10;
    int repeats = 3;
    if (argc > 1) {
        instances_per_rp = std::atoi(argv[1]);
    }
    if (argc > 2) {
        repeats = std::atoi(argv[2]);
    }

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled (serial build)\n");
#endif
    std::printf("workload: 16 RPs x %d instances, m=20, 8 APs, full (n, k) grid, %d repeats\n\n",
                instances_per_rp, repeats);

    GenerationSpec spec;
    spec.scenario = default_scenario();
    spec.readings_per_sample = 20;
    spec.instances_per_rp = instances_per_rp;
    spec.seed = 7;

    // generation: serial vs OpenMP over RP substreams
    double gen_serial = 0.0, gen_parallel = 0.0;
    std::vector<LabeledSample> train_serial, train_parallel;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        train_serial = generate_dataset_serial(spec);
        gen_serial += seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        train_parallel = generate_dataset(spec);
        gen_parallel += seconds_since(t0);
    }
    const bool gen_match = train_serial == train_parallel;
    std::printf("%-24s %10.4f s %10.4f s  speedup %.2fx  results %s\n", "generate_dataset",
                gen_serial / repeats, gen_parallel / repeats, gen_serial / gen_parallel,
                gen_match ? "identical" : "DIFFER");

    spec.seed = 8;
    const auto test = generate_dataset(spec);

    // treatment grid: serial vs OpenMP over treatments
    GridSpec grid;
    grid.method = Method::I;
    double grid_serial = 0.0, grid_parallel = 0.0;
    std::vector<TreatmentOutcome> out_serial, out_parallel;
    for (int r = 0; r < repeats; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        out_serial = treatment_grid_serial(grid, train_serial, test, spec.scenario);
        grid_serial += seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        out_parallel = treatment_grid(grid, train_serial, test, spec.scenario);
        grid_parallel += seconds_since(t0);
    }
    const bool grid_match = same_results(out_serial, out_parallel);
    std::printf("%-24s %10.4f s %10.4f s  speedup %.2fx  results %s\n", "treatment_grid",
                grid_serial / repeats, grid_parallel / repeats, grid_serial / grid_parallel,
                grid_match ? "identical" : "DIFFER");

    return gen_match && grid_match ? 0 : 1;
}
