#include "indoorloc/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace indoorloc {

namespace {

constexpr const char* kRawHeader = "rp_id,instance_idx,reading_idx,ap_id,rssi_dbm";

// Integers print without a decimal point; everything else round-trips.
std::string format_number(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(v));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + file.string());
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw std::runtime_error("cannot open: " + file.string());
    }
    return in;
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json params_to_json(const LogNormalParams& p) {
    return nlohmann::json{{"ref_distance_m", p.ref_distance_m},
                          {"rssi_at_ref_dbm", p.rssi_at_ref_dbm},
                          {"path_loss_exponent", p.path_loss_exponent},
                          {"shadowing_sigma_db", p.shadowing_sigma_db}};
}

LogNormalParams params_from_json(const nlohmann::json& j) {
    LogNormalParams p;
    p.ref_distance_m = j.at("ref_distance_m").get<double>();
    p.rssi_at_ref_dbm = j.at("rssi_at_ref_dbm").get<double>();
    p.path_loss_exponent = j.at("path_loss_exponent").get<double>();
    p.shadowing_sigma_db = j.at("shadowing_sigma_db").get<double>();
    return p;
}

}  // namespace

DatasetBundle make_bundle(const GenerationSpec& spec, std::vector<LabeledSample> samples) {
    DatasetBundle bundle;
    bundle.scenario = spec.scenario;
    bundle.samples = std::move(samples);
    bundle.metadata.seed = spec.seed;
    bundle.metadata.readings_per_sample = spec.readings_per_sample;
    bundle.metadata.instances_per_rp = spec.instances_per_rp;
    bundle.metadata.params = spec.params;
    for (const auto& ap : spec.scenario.access_points) {
        bundle.metadata.ap_order.push_back(ap.id);
    }
    bundle.metadata.created_at = utc_timestamp();
    return bundle;
}

void write_raw_csv(std::span<const LabeledSample> samples, const std::filesystem::path& file) {
    auto out = open_output(file);
    out << kRawHeader << "\n";
    std::map<int, int> instance_counter;
    for (const auto& ls : samples) {
        const int instance_idx = ++instance_counter[ls.rp_id];
        for (int r = 0; r < ls.sample.rows; ++r) {
            for (int c = 0; c < ls.sample.cols; ++c) {
                out << ls.rp_id << ',' << instance_idx << ',' << (r + 1) << ','
                    << ls.sample.ap_ids[static_cast<std::size_t>(c)] << ','
                    << format_number(ls.sample.at(r, c)) << "\n";
            }
        }
    }
    if (!out) {
        throw std::runtime_error("write failed: " + file.string());
    }
}

std::vector<LabeledSample> read_raw_csv(const std::filesystem::path& file,
                                        const std::vector<int>& ap_order) {
    if (ap_order.empty()) {
        throw std::invalid_argument("read_raw_csv: empty AP order");
    }
    auto in = open_input(file);

    auto fail = [&file](std::size_t line_no, const std::string& what) -> std::runtime_error {
        return std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " + what);
    };

    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw fail(1, "empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kRawHeader) {
        throw fail(1, "bad header, expected '" + std::string(kRawHeader) + "'");
    }

    std::map<int, std::size_t> ap_column;
    for (std::size_t j = 0; j < ap_order.size(); ++j) {
        ap_column[ap_order[j]] = j;
    }

    // (rp, instance) -> (reading, ap column) -> value
    std::map<std::pair<int, int>, std::map<std::pair<int, std::size_t>, double>> groups;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        int rp_id = 0, instance_idx = 0, reading_idx = 0, ap_id = 0;
        double rssi = 0.0;
        char trailing = 0;
        const int got = std::sscanf(line.c_str(), "%d,%d,%d,%d,%lf%c", &rp_id, &instance_idx,
                                    &reading_idx, &ap_id, &rssi, &trailing);
        if (got != 5) {
            throw fail(line_no, "malformed row '" + line + "'");
        }
        if (instance_idx < 1 || reading_idx < 1) {
            throw fail(line_no, "instance_idx and reading_idx are 1-based");
        }
        const auto col = ap_column.find(ap_id);
        if (col == ap_column.end()) {
            throw fail(line_no, "ap_id " + std::to_string(ap_id) + " not in dataset AP order");
        }
        auto [it, inserted] = groups[{rp_id, instance_idx}].try_emplace(
            {reading_idx, col->second}, rssi);
        if (!inserted) {
            throw fail(line_no, "duplicate reading (rp " + std::to_string(rp_id) + ", instance " +
                                    std::to_string(instance_idx) + ", reading " +
                                    std::to_string(reading_idx) + ", ap " +
                                    std::to_string(ap_id) + ")");
        }
    }

    const int n = static_cast<int>(ap_order.size());
    std::vector<LabeledSample> out;
    out.reserve(groups.size());
    for (const auto& [key, cells] : groups) {
        const auto [rp_id, instance_idx] = key;
        auto group_error = [&](const std::string& what) -> std::runtime_error {
            return std::runtime_error(file.string() + ": rp " + std::to_string(rp_id) +
                                      ", instance " + std::to_string(instance_idx) + ": " + what);
        };
        if (cells.size() % static_cast<std::size_t>(n) != 0) {
            throw group_error("ragged matrix: " + std::to_string(cells.size()) +
                              " readings do not fill rows of " + std::to_string(n) + " APs");
        }
        const int m = static_cast<int>(cells.size()) / n;
        SampleMatrix sample;
        sample.rows = m;
        sample.cols = n;
        sample.ap_ids = ap_order;
        sample.values.resize(static_cast<std::size_t>(m) * n);
        for (int r = 1; r <= m; ++r) {
            for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
                const auto it = cells.find({r, j});
                if (it == cells.end()) {
                    throw group_error("missing reading " + std::to_string(r) + " for ap " +
                                      std::to_string(ap_order[j]));
                }
                sample.at(r - 1, static_cast<int>(j)) = it->second;
            }
        }
        out.push_back(LabeledSample{std::move(sample), rp_id});
    }
    if (out.empty()) {
        throw std::runtime_error(file.string() + ": no data rows");
    }
    return out;
}

std::vector<int> raw_csv_ap_ids(const std::filesystem::path& file) {
    auto in = open_input(file);
    std::string line;
    std::getline(in, line);   // header; validated by read_raw_csv proper
    std::vector<int> ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        int rp_id = 0, instance_idx = 0, reading_idx = 0, ap_id = 0;
        double rssi = 0.0;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%lf", &rp_id, &instance_idx, &reading_idx,
                        &ap_id, &rssi) != 5) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": malformed row '" + line + "'");
        }
        if (std::find(ids.begin(), ids.end(), ap_id) == ids.end()) {
            ids.push_back(ap_id);
        }
    }
    return ids;
}

void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_raw_csv(bundle.samples, dir / "readings.csv");

    nlohmann::json j;
    j["schema_version"] = bundle.metadata.schema_version;
    j["seed"] = bundle.metadata.seed;
    j["readings_per_sample"] = bundle.metadata.readings_per_sample;
    j["instances_per_rp"] = bundle.metadata.instances_per_rp;
    j["params"] = params_to_json(bundle.metadata.params);
    j["ap_order"] = bundle.metadata.ap_order;
    j["scenario"] = nlohmann::json::parse(scenario_to_json(bundle.scenario));
    j["created_at"] = bundle.metadata.created_at;

    auto out = open_output(dir / "metadata.json");
    out << j.dump(2) << "\n";
}

DatasetBundle read_dataset(const std::filesystem::path& dir) {
    auto in = open_input(dir / "metadata.json");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error((dir / "metadata.json").string() + ": invalid JSON: " + e.what());
    }

    DatasetBundle bundle;
    try {
        bundle.metadata.schema_version = j.at("schema_version").get<int>();
        bundle.metadata.seed = j.at("seed").get<std::uint64_t>();
        bundle.metadata.readings_per_sample = j.at("readings_per_sample").get<int>();
        bundle.metadata.instances_per_rp = j.at("instances_per_rp").get<int>();
        bundle.metadata.params = params_from_json(j.at("params"));
        bundle.metadata.ap_order = j.at("ap_order").get<std::vector<int>>();
        bundle.metadata.created_at = j.value("created_at", std::string{});
        bundle.scenario = scenario_from_json(j.at("scenario").dump());
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error((dir / "metadata.json").string() +
                                 ": missing or malformed field: " + e.what());
    }
    std::vector<int> scenario_order;
    for (const auto& ap : bundle.scenario.access_points) {
        scenario_order.push_back(ap.id);
    }
    if (bundle.metadata.ap_order != scenario_order) {
        throw std::runtime_error((dir / "metadata.json").string() +
                                 ": ap_order does not match the scenario's access points");
    }

    bundle.samples = read_raw_csv(dir / "readings.csv", bundle.metadata.ap_order);
    const int rp_count = static_cast<int>(bundle.scenario.reference_points.size());
    for (const auto& ls : bundle.samples) {
        if (ls.rp_id < 1 || ls.rp_id > rp_count) {
            throw std::runtime_error((dir / "readings.csv").string() + ": rp_id " +
                                     std::to_string(ls.rp_id) + " not in the scenario");
        }
    }
    return bundle;
}

Scenario read_scenario_file(const std::filesystem::path& file) {
    auto in = open_input(file);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void write_scenario_file(const Scenario& scenario, const std::filesystem::path& file) {
    auto out = open_output(file);
    out << scenario_to_json(scenario);
}

std::string method_config_to_json(const MethodConfig& config) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["method"] = std::string(to_string(config.method));
    j["k"] = config.k;
    j["n_aps"] = config.n_aps;
    j["powed_floor_dbm"] = config.powed.floor_dbm;
    j["powed_beta"] = config.powed.beta;
    j["pca_components"] = config.pca_components;
    return j.dump();
}

MethodConfig method_config_from_json(const std::string& text) {
    MethodConfig config;
    try {
        const auto j = nlohmann::json::parse(text);
        config.method = method_from_string(j.at("method").get<std::string>());
        config.k = j.at("k").get<int>();
        config.n_aps = j.at("n_aps").get<int>();
        config.powed.floor_dbm = j.at("powed_floor_dbm").get<double>();
        config.powed.beta = j.at("powed_beta").get<double>();
        config.pca_components = j.at("pca_components").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("method config: missing or malformed field: ") +
                                    e.what());
    }
    config.validate();
    return config;
}

void write_instances_csv(std::span<const FingerprintInstance> instances,
                         const std::filesystem::path& file) {
    auto out = open_output(file);
    out << "rp_id";
    if (!instances.empty()) {
        for (std::size_t a = 1; a <= instances.front().attributes.size(); ++a) {
            out << ",attr_" << a;
        }
    }
    out << "\n";
    for (const auto& inst : instances) {
        out << inst.rp_label.value_or(0);
        for (double a : inst.attributes) {
            out << ',' << format_number(a);
        }
        out << "\n";
    }
}

void write_instances_sidecar(const std::filesystem::path& csv_file, Representation rep,
                             std::span<const int> ap_order, const PowedParams& powed) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["representation"] = std::string(to_string(rep));
    j["ap_order"] = std::vector<int>(ap_order.begin(), ap_order.end());
    j["params"] = nlohmann::json::object();
    if (rep == Representation::powed) {
        j["params"]["floor_dbm"] = powed.floor_dbm;
        j["params"]["beta"] = powed.beta;
    }
    auto sidecar = csv_file;
    sidecar += ".json";
    auto out = open_output(sidecar);
    out << j.dump(2) << "\n";
}

void write_results_jsonl(std::span<const TreatmentOutcome> outcomes, Method method,
                         const std::filesystem::path& file) {
    auto out = open_output(file);
    for (const auto& outcome : outcomes) {
        nlohmann::json j;
        j["schema_version"] = 1;
        j["method"] = std::string(to_string(method));
        j["n_aps"] = outcome.result.n_aps;
        j["k"] = outcome.result.k;
        j["mean_error_m"] = outcome.result.mean_error_m;
        j["estimate_count"] = outcome.result.estimate_count;
        out << j.dump() << "\n";
    }
    if (!out) {
        throw std::runtime_error("write failed: " + file.string());
    }
}

std::vector<double> read_results_mean_errors(const std::filesystem::path& file) {
    auto in = open_input(file);
    std::vector<double> errors;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            errors.push_back(j.at("mean_error_m").get<double>());
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": bad result line: " + e.what());
        }
    }
    if (errors.empty()) {
        throw std::runtime_error(file.string() + ": no result lines");
    }
    return errors;
}

void write_cdf_csv(std::span<const CdfPoint> points, const std::filesystem::path& file) {
    auto out = open_output(file);
    out << "threshold_m,cumulative_fraction\n";
    for (const auto& p : points) {
        out << format_number(p.threshold_m) << ',' << format_number(p.cumulative_fraction)
            << "\n";
    }
}

}  // namespace indoorloc
