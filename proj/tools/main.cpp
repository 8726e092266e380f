#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "indoorloc/dataset_io.hpp"
#include "indoorloc/evaluation.hpp"
#include "indoorloc/locator.hpp"
#include "indoorloc/propagation.hpp"

namespace {

using namespace indoorloc;

struct ScenarioFlags {
    std::string scenario_file;
    double ap_height = 2.0;
};

struct ModelFlags {
    double sigma = 3.0;
    double d0 = 1.0;
    double rssi_at_ref = -40.0;
    double eta = 2.5;
};

struct MethodFlags {
    std::string method = "I";
    int k = 1;
    int n_aps = 8;
    double powed_floor = -100.0;
    double powed_beta = std::numbers::e;
    int pca_components = 3;

    MethodConfig config() const {
        MethodConfig c;
        c.method = method_from_string(method);
        c.k = k;
        c.n_aps = n_aps;
        c.powed = PowedParams{powed_floor, powed_beta};
        c.pca_components = pca_components;
        c.validate();
        return c;
    }
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
    cmd->add_option("--scenario", f.scenario_file, "Scenario JSON file (default: built-in room)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--ap-height", f.ap_height,
                    "AP height for the built-in scenario's wall layout [m]");
}

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("--sigma", f.sigma, "Shadowing sigma [dB]");
    cmd->add_option("--d0", f.d0, "Model reference distance [m]");
    cmd->add_option("--rssi-at-ref", f.rssi_at_ref, "RSSI at the reference distance [dBm]");
    cmd->add_option("--path-loss-exponent,--eta", f.eta, "Path loss exponent");
}

void add_method_flags(CLI::App* cmd, MethodFlags& f, bool with_k_n = true) {
    cmd->add_option("--method", f.method, "Localization method: I, II, PS or 3PCA")->required();
    if (with_k_n) {
        cmd->add_option("--k", f.k, "Neighbor count (the protocol uses odd values)");
        cmd->add_option("--n-aps", f.n_aps, "Number of APs used (dataset-order prefix)");
    }
    cmd->add_option("--powed-floor", f.powed_floor, "Powed floor [dBm] (PS)");
    cmd->add_option("--powed-beta", f.powed_beta, "Powed exponent (PS)");
    cmd->add_option("--pca-components", f.pca_components, "PCA component count (3PCA)");
}

Scenario load_scenario(const ScenarioFlags& f) {
    if (!f.scenario_file.empty()) {
        return read_scenario_file(f.scenario_file);
    }
    return default_scenario(f.ap_height);
}

LogNormalParams model_params(const ModelFlags& f) {
    return LogNormalParams{f.d0, f.rssi_at_ref, f.eta, f.sigma};
}

// Longest training-order prefix fully present in the query file; rejects APs
// outside that prefix so column semantics stay unambiguous.
std::vector<int> query_ap_order(const std::filesystem::path& file,
                                const std::vector<int>& training_order, int n_aps) {
    const std::vector<int> present = raw_csv_ap_ids(file);
    auto has = [&present](int id) {
        return std::find(present.begin(), present.end(), id) != present.end();
    };
    std::vector<int> prefix;
    for (int id : training_order) {
        if (!has(id)) {
            break;
        }
        prefix.push_back(id);
    }
    if (static_cast<int>(prefix.size()) < n_aps) {
        throw std::runtime_error(file.string() + ": query covers only the first " +
                                 std::to_string(prefix.size()) +
                                 " training APs, need n_aps = " + std::to_string(n_aps));
    }
    for (int id : present) {
        if (std::find(prefix.begin(), prefix.end(), id) == prefix.end()) {
            throw std::runtime_error(file.string() + ": ap_id " + std::to_string(id) +
                                     " is outside the training AP-order prefix");
        }
    }
    return prefix;
}

nlohmann::json point_json(const Point3& p) {
    return nlohmann::json{{"x", p.x}, {"y", p.y}, {"z", p.z}};
}

void print_summary(const std::vector<TreatmentOutcome>& outcomes, Method method) {
    std::printf("method %s: %zu treatments, %zu estimates each\n",
                std::string(to_string(method)).c_str(), outcomes.size(),
                outcomes.empty() ? std::size_t{0} : outcomes.front().result.estimate_count);
    std::printf("%4s %4s %14s %14s\n", "n", "k", "mean_error_m", "mean_time_s");
    const TreatmentOutcome* best = nullptr;
    for (const auto& o : outcomes) {
        std::printf("%4d %4d %14.6f %14.9f\n", o.result.n_aps, o.result.k,
                    o.result.mean_error_m, o.mean_time_s);
        if (best == nullptr || o.result.mean_error_m < best->result.mean_error_m) {
            best = &o;
        }
    }
    if (best != nullptr) {
        std::printf("best: n=%d k=%d mean_error_m=%.6f\n", best->result.n_aps, best->result.k,
                    best->result.mean_error_m);
    }
}

int run_simulate(const ScenarioFlags& sf, const ModelFlags& mf, int m, int instances_per_rp,
                 std::uint64_t seed, const std::string& out_dir, bool serial) {
    GenerationSpec spec;
    spec.scenario = load_scenario(sf);
    spec.params = model_params(mf);
    spec.readings_per_sample = m;
    spec.instances_per_rp = instances_per_rp;
    spec.seed = seed;

    auto samples = serial ? generate_dataset_serial(spec) : generate_dataset(spec);
    const DatasetBundle bundle = make_bundle(spec, std::move(samples));
    write_dataset(bundle, out_dir);
    std::printf("wrote %zu samples (%zu rps x %d instances, m=%d, n=%zu aps, seed=%llu) to %s\n",
                bundle.samples.size(), spec.scenario.reference_points.size(), instances_per_rp, m,
                spec.scenario.access_points.size(), static_cast<unsigned long long>(seed),
                out_dir.c_str());
    return 0;
}

int run_build_fingerprints(const std::string& in_dir, const std::string& representation,
                           const std::string& out_file) {
    const Representation rep = representation_from_string(representation);
    if (rep != Representation::quartile && rep != Representation::mean) {
        throw std::runtime_error("build-fingerprints supports quartile or mean");
    }
    const DatasetBundle bundle = read_dataset(in_dir);
    std::vector<FingerprintInstance> instances;
    instances.reserve(bundle.samples.size());
    for (const auto& ls : bundle.samples) {
        instances.push_back(rep == Representation::quartile
                                ? build_quartile_instance(ls.sample, ls.rp_id)
                                : build_mean_instance(ls.sample, ls.rp_id));
    }
    write_instances_csv(instances, out_file);
    write_instances_sidecar(out_file, rep, bundle.metadata.ap_order, PowedParams{});
    std::printf("wrote %zu %s instances to %s\n", instances.size(), representation.c_str(),
                out_file.c_str());
    return 0;
}

int run_localize(const std::string& train_dir, const MethodFlags& mf,
                 const std::string& query_file) {
    const DatasetBundle train = read_dataset(train_dir);
    const MethodConfig config = mf.config();

    const auto order = query_ap_order(query_file, train.metadata.ap_order, config.n_aps);
    const auto queries = read_raw_csv(query_file, order);

    const Localizer localizer(config, train.samples, train.scenario);
    for (const auto& q : queries) {
        const PositionEstimate est = localizer.localize(q.sample);
        nlohmann::json j;
        j["schema_version"] = 1;
        j["method"] = std::string(to_string(config.method));
        j["k"] = config.k;
        j["n_aps"] = config.n_aps;
        j["config"] = nlohmann::json::parse(method_config_to_json(config));
        j["query_rp_id"] = q.rp_id;
        j["estimated_position"] = point_json(est.coordinates);
        j["tie_broken"] = est.tie_broken;
        j["neighbors"] = nlohmann::json::array();
        for (const auto& nb : est.neighbors) {
            j["neighbors"].push_back({{"training_index", nb.training_index},
                                      {"distance", nb.distance},
                                      {"rp_id", nb.rp_label}});
        }
        std::cout << j.dump() << "\n";
    }
    return 0;
}

int run_evaluate(const std::string& train_dir, const std::string& test_dir, const MethodFlags& mf,
                 std::vector<int> n_values, std::vector<int> k_values,
                 const std::string& out_file, bool serial) {
    const DatasetBundle train = read_dataset(train_dir);
    const DatasetBundle test = read_dataset(test_dir);
    if (!(train.scenario == test.scenario)) {
        throw std::runtime_error("evaluate: train and test datasets use different scenarios");
    }
    if (train.metadata.ap_order != test.metadata.ap_order) {
        throw std::runtime_error("evaluate: train and test datasets use different AP orders");
    }

    GridSpec spec;
    spec.method = method_from_string(mf.method);
    if (!n_values.empty()) {
        spec.n_values = std::move(n_values);
    }
    if (!k_values.empty()) {
        spec.k_values = std::move(k_values);
    }
    spec.powed = PowedParams{mf.powed_floor, mf.powed_beta};
    spec.pca_components = mf.pca_components;

    const auto outcomes = serial
                              ? treatment_grid_serial(spec, train.samples, test.samples,
                                                      train.scenario)
                              : treatment_grid(spec, train.samples, test.samples, train.scenario);
    write_results_jsonl(outcomes, spec.method, out_file);
    std::printf("train seed=%llu, test seed=%llu\n",
                static_cast<unsigned long long>(train.metadata.seed),
                static_cast<unsigned long long>(test.metadata.seed));
    print_summary(outcomes, spec.method);
    std::printf("results: %s\n", out_file.c_str());
    return 0;
}

int run_sweep_m(const ScenarioFlags& sf, const ModelFlags& mf, const MethodFlags& methodf,
                std::vector<int> m_values, int instances_per_rp, std::uint64_t seed,
                const std::string& out_file) {
    const Scenario scenario = load_scenario(sf);
    const auto rows = m_sweep(scenario, model_params(mf), m_values, methodf.config(),
                              instances_per_rp, seed);
    std::printf("seed=%llu\n", static_cast<unsigned long long>(seed));
    std::printf("%6s %14s %14s\n", "m", "mean_error_m", "mean_time_s");
    for (const auto& row : rows) {
        std::printf("%6d %14.6f %14.9f\n", row.m, row.mean_error_m, row.mean_time_s);
    }
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + out_file);
        }
        out << "m,mean_error_m,mean_time_s\n";
        for (const auto& row : rows) {
            char buf[80];
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.9g\n", row.m, row.mean_error_m,
                          row.mean_time_s);
            out << buf;
        }
    }
    return 0;
}

int run_export_cdf(const std::string& results_file, const std::string& out_file) {
    const auto errors = read_results_mean_errors(results_file);
    const auto cdf = error_cdf(errors);
    write_cdf_csv(cdf, out_file);
    std::printf("wrote %zu CDF points (from %zu treatments) to %s\n", cdf.size(), errors.size(),
                out_file.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quartile-fingerprint kNN indoor localization toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic raw RSSI dataset");
    ScenarioFlags sim_scenario;
    ModelFlags sim_model;
    int sim_m = 20, sim_instances = 10;
    std::uint64_t sim_seed = 1;
    std::string sim_out;
    bool sim_serial = false;
    add_scenario_flags(simulate, sim_scenario);
    add_model_flags(simulate, sim_model);
    simulate->add_option("--m", sim_m, "Readings per sample");
    simulate->add_option("--instances-per-rp", sim_instances, "Sample matrices per RP");
    simulate->add_option("--seed", sim_seed, "Master seed");
    simulate->add_option("--out", sim_out, "Output directory")->required();
    simulate->add_flag("--serial", sim_serial, "Use the serial reference generator");

    // build-fingerprints
    auto* build = app.add_subcommand("build-fingerprints",
                                     "Transform a raw dataset into instance vectors");
    std::string build_in, build_rep = "quartile", build_out;
    build->add_option("--in", build_in, "Dataset directory")->required();
    build->add_option("--representation", build_rep, "quartile or mean");
    build->add_option("--out", build_out, "Output CSV")->required();

    // localize
    auto* localize_cmd = app.add_subcommand("localize", "Estimate positions for query samples");
    std::string loc_train, loc_query;
    MethodFlags loc_method;
    localize_cmd->add_option("--train", loc_train, "Training dataset directory")->required();
    add_method_flags(localize_cmd, loc_method);
    localize_cmd->add_option("--query", loc_query, "Raw readings CSV with query samples")
        ->required()
        ->check(CLI::ExistingFile);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Run the (n, k) treatment grid");
    std::string eval_train, eval_test, eval_out = "results.jsonl";
    MethodFlags eval_method;
    std::vector<int> eval_n, eval_k;
    bool eval_serial = false;
    evaluate->add_option("--train", eval_train, "Training dataset directory")->required();
    evaluate->add_option("--test", eval_test, "Test dataset directory")->required();
    add_method_flags(evaluate, eval_method, /*with_k_n=*/false);
    evaluate->add_option("--n-values", eval_n, "AP counts to sweep (default 2..8)")
        ->delimiter(',');
    evaluate->add_option("--k-values", eval_k, "k values to sweep (default odd 1..13)")
        ->delimiter(',');
    evaluate->add_option("--out", eval_out, "Results JSONL path");
    evaluate->add_flag("--serial", eval_serial, "Use the serial reference grid");

    // sweep-m
    auto* sweep = app.add_subcommand("sweep-m", "Mean error and time vs readings per sample");
    ScenarioFlags sweep_scenario;
    ModelFlags sweep_model;
    MethodFlags sweep_method;
    std::vector<int> sweep_m_values = {5, 10, 15, 20};
    int sweep_instances = 10;
    std::uint64_t sweep_seed = 1;
    std::string sweep_out;
    add_scenario_flags(sweep, sweep_scenario);
    add_model_flags(sweep, sweep_model);
    add_method_flags(sweep, sweep_method);
    sweep->add_option("--m-values", sweep_m_values, "Readings-per-sample values")->delimiter(',');
    sweep->add_option("--instances-per-rp", sweep_instances, "Sample matrices per RP");
    sweep->add_option("--seed", sweep_seed, "Master seed");
    sweep->add_option("--out", sweep_out, "Optional CSV output");

    // export-cdf
    auto* export_cdf = app.add_subcommand("export-cdf",
                                          "CDF of per-treatment mean errors as CSV");
    std::string cdf_results, cdf_out;
    export_cdf->add_option("--results", cdf_results, "Treatment results JSONL")
        ->required()
        ->check(CLI::ExistingFile);
    export_cdf->add_option("--out", cdf_out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;   // usage errors exit 2
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(sim_scenario, sim_model, sim_m, sim_instances, sim_seed, sim_out,
                                sim_serial);
        }
        if (build->parsed()) {
            return run_build_fingerprints(build_in, build_rep, build_out);
        }
        if (localize_cmd->parsed()) {
            return run_localize(loc_train, loc_method, loc_query);
        }
        if (evaluate->parsed()) {
            return run_evaluate(eval_train, eval_test, eval_method, eval_n, eval_k, eval_out,
                                eval_serial);
        }
        if (sweep->parsed()) {
            return run_sweep_m(sweep_scenario, sweep_model, sweep_method, sweep_m_values,
                               sweep_instances, sweep_seed, sweep_out);
        }
        if (export_cdf->parsed()) {
            return run_export_cdf(cdf_results, cdf_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;   // data errors exit 1
    }
    return 0;
}
