#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "indoorloc/evaluation.hpp"
#include "indoorloc/propagation.hpp"

namespace indoorloc {

struct DatasetMetadata {
    int schema_version = 1;
    std::uint64_t seed = 0;
    int readings_per_sample = 0;
    int instances_per_rp = 0;
    LogNormalParams params;
    std::vector<int> ap_order;
    std::string created_at;   // ISO 8601; excluded from determinism comparisons
};

struct DatasetBundle {
    Scenario scenario;
    std::vector<LabeledSample> samples;
    DatasetMetadata metadata;
};

DatasetBundle make_bundle(const GenerationSpec& spec, std::vector<LabeledSample> samples);

// dir/readings.csv + dir/metadata.json (metadata embeds the scenario).
void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir);
DatasetBundle read_dataset(const std::filesystem::path& dir);

// Raw readings CSV, header rp_id,instance_idx,reading_idx,ap_id,rssi_dbm.
// Rows may arrive in any order; matrices are grouped by (rp_id, instance_idx)
// with columns in ap_order. Ragged or malformed input is rejected naming the
// line or the (rp, instance) pair. Round-trips bit-exactly.
void write_raw_csv(std::span<const LabeledSample> samples, const std::filesystem::path& file);
std::vector<LabeledSample> read_raw_csv(const std::filesystem::path& file,
                                        const std::vector<int>& ap_order);

// Distinct ap_ids present in a raw CSV, in first-appearance order.
std::vector<int> raw_csv_ap_ids(const std::filesystem::path& file);

Scenario read_scenario_file(const std::filesystem::path& file);
void write_scenario_file(const Scenario& scenario, const std::filesystem::path& file);

std::string method_config_to_json(const MethodConfig& config);
MethodConfig method_config_from_json(const std::string& text);

// One row per instance: rp_id (0 when unlabeled), then attributes.
void write_instances_csv(std::span<const FingerprintInstance> instances,
                         const std::filesystem::path& file);
// Sidecar <file>.json: representation tag, AP order, parameters.
void write_instances_sidecar(const std::filesystem::path& csv_file, Representation rep,
                             std::span<const int> ap_order, const PowedParams& powed);

// One TreatmentResult per line; deterministic given deterministic inputs.
void write_results_jsonl(std::span<const TreatmentOutcome> outcomes, Method method,
                         const std::filesystem::path& file);
std::vector<double> read_results_mean_errors(const std::filesystem::path& file);

void write_cdf_csv(std::span<const CdfPoint> points, const std::filesystem::path& file);

}  // namespace indoorloc
