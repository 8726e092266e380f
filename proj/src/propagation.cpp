#include "indoorloc/propagation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace indoorloc {

double log_normal_rssi(double distance_m, const LogNormalParams& params, double noise_db) {
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("log_normal_rssi: distance must be > 0, got " +
                                    std::to_string(distance_m));
    }
    if (params.ref_distance_m <= 0.0) {
        throw std::invalid_argument("log_normal_rssi: ref_distance_m must be > 0");
    }
    return params.rssi_at_ref_dbm -
           10.0 * params.path_loss_exponent * std::log10(distance_m / params.ref_distance_m) +
           noise_db;
}

QuadraticFit fit_quadratic(std::span<const std::pair<double, double>> calibration) {
    if (calibration.size() < 3) {
        throw std::invalid_argument("fit_quadratic: need at least 3 calibration points");
    }
    int distinct = 0;
    for (std::size_t i = 0; i < calibration.size() && distinct < 3; ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < i; ++j) {
            if (calibration[j].first == calibration[i].first) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            ++distinct;
        }
    }
    if (distinct < 3) {
        throw std::invalid_argument("fit_quadratic: need at least 3 distinct distances");
    }

    // Normal equations for the basis [d^2, d, 1], solved by Gaussian
    // elimination with partial pivoting.
    double ata[3][3] = {};
    double aty[3] = {};
    for (const auto& [d, rssi] : calibration) {
        const double row[3] = {d * d, d, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                ata[i][j] += row[i] * row[j];
            }
            aty[i] += row[i] * rssi;
        }
    }

    double aug[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            aug[i][j] = ata[i][j];
        }
        aug[i][3] = aty[i];
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(aug[pivot][col]) < 1e-12) {
            throw std::invalid_argument("fit_quadratic: degenerate design (rank < 3)");
        }
        if (pivot != col) {
            for (int j = 0; j < 4; ++j) {
                std::swap(aug[col][j], aug[pivot][j]);
            }
        }
        for (int r = 0; r < 3; ++r) {
            if (r == col) {
                continue;
            }
            const double f = aug[r][col] / aug[col][col];
            for (int j = col; j < 4; ++j) {
                aug[r][j] -= f * aug[col][j];
            }
        }
    }

    QuadraticFit fit;
    fit.a = aug[0][3] / aug[0][0];
    fit.b = aug[1][3] / aug[1][1];
    fit.c = aug[2][3] / aug[2][2];

    double ss = 0.0;
    for (const auto& [d, rssi] : calibration) {
        const double r = rssi - fit.evaluate(d);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(calibration.size()));
    return fit;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id) {
    std::uint64_t state = master;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i <= stream_id; ++i) {
        out = splitmix64(state);
    }
    return out;
}

double GaussianStream::next() {
    // Two fixed draws per variate; see header.
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;   // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;         // [0, 1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

void check_generation_spec(const GenerationSpec& spec) {
    spec.scenario.validate();
    if (spec.scenario.access_points.empty()) {
        throw std::invalid_argument("generate_dataset: scenario has no access points");
    }
    if (spec.readings_per_sample < 1) {
        throw std::invalid_argument("generate_dataset: readings_per_sample must be >= 1");
    }
    if (spec.instances_per_rp < 1) {
        throw std::invalid_argument("generate_dataset: instances_per_rp must be >= 1");
    }
    if (spec.params.shadowing_sigma_db < 0.0) {
        throw std::invalid_argument("generate_dataset: shadowing_sigma_db must be >= 0");
    }
    if (spec.params.ref_distance_m <= 0.0) {
        throw std::invalid_argument("generate_dataset: ref_distance_m must be > 0");
    }
    for (const auto& rp : spec.scenario.reference_points) {
        for (const auto& ap : spec.scenario.access_points) {
            if (euclidean_distance(rp.position, ap.position) <= 0.0) {
                throw std::invalid_argument("generate_dataset: ap " + std::to_string(ap.id) +
                                            " coincides with rp " + std::to_string(rp.id));
            }
        }
    }
}

// All instances of a single RP, drawn from its own sub-stream.
std::vector<LabeledSample> generate_rp(const GenerationSpec& spec, const ReferencePoint& rp) {
    const auto& aps = spec.scenario.access_points;
    const int n = static_cast<int>(aps.size());
    const int m = spec.readings_per_sample;

    std::vector<double> baseline(static_cast<std::size_t>(n));
    std::vector<int> ap_ids(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double d = euclidean_distance(rp.position, aps[static_cast<std::size_t>(j)].position);
        baseline[static_cast<std::size_t>(j)] = log_normal_rssi(d, spec.params);
        ap_ids[static_cast<std::size_t>(j)] = aps[static_cast<std::size_t>(j)].id;
    }

    GaussianStream noise(derive_stream_seed(spec.seed, static_cast<std::uint64_t>(rp.id)));
    const double sigma = spec.params.shadowing_sigma_db;

    std::vector<LabeledSample> out;
    out.reserve(static_cast<std::size_t>(spec.instances_per_rp));
    for (int inst = 0; inst < spec.instances_per_rp; ++inst) {
        SampleMatrix sample;
        sample.rows = m;
        sample.cols = n;
        sample.ap_ids = ap_ids;
        sample.values.resize(static_cast<std::size_t>(m) * n);
        for (int r = 0; r < m; ++r) {
            for (int j = 0; j < n; ++j) {
                const double rssi = baseline[static_cast<std::size_t>(j)] + sigma * noise.next();
                sample.at(r, j) = std::round(rssi);   // half away from zero, integer dBm
            }
        }
        out.push_back(LabeledSample{std::move(sample), rp.id});
    }
    return out;
}

}  // namespace

std::vector<LabeledSample> generate_dataset_serial(const GenerationSpec& spec) {
    check_generation_spec(spec);
    std::vector<LabeledSample> out;
    out.reserve(spec.scenario.reference_points.size() *
                static_cast<std::size_t>(spec.instances_per_rp));
    for (const auto& rp : spec.scenario.reference_points) {
        auto block = generate_rp(spec, rp);
        for (auto& ls : block) {
            out.push_back(std::move(ls));
        }
    }
    return out;
}

std::vector<LabeledSample> generate_dataset(const GenerationSpec& spec) {
    check_generation_spec(spec);
    const auto& rps = spec.scenario.reference_points;
    const int rp_count = static_cast<int>(rps.size());
    const std::size_t per_rp = static_cast<std::size_t>(spec.instances_per_rp);

    std::vector<LabeledSample> out(static_cast<std::size_t>(rp_count) * per_rp);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < rp_count; ++i) {
        auto block = generate_rp(spec, rps[static_cast<std::size_t>(i)]);
        for (std::size_t j = 0; j < per_rp; ++j) {
            out[static_cast<std::size_t>(i) * per_rp + j] = std::move(block[j]);
        }
    }
    return out;
}

}  // namespace indoorloc
