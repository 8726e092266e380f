#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "indoorloc/geometry.hpp"
#include "indoorloc/representations.hpp"

namespace indoorloc {

struct LogNormalParams {
    double ref_distance_m = 1.0;       // d0
    double rssi_at_ref_dbm = -40.0;
    double path_loss_exponent = 2.5;   // eta
    double shadowing_sigma_db = 3.0;   // sigma

    bool operator==(const LogNormalParams&) const = default;
};

// rssi_at_ref - 10 * eta * log10(d / d0) + noise. Rejects d <= 0.
double log_normal_rssi(double distance_m, const LogNormalParams& params, double noise_db = 0.0);

struct QuadraticFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual_rms = 0.0;

    double evaluate(double distance_m) const { return (a * distance_m + b) * distance_m + c; }
};

// Least-squares rssi ~ a d^2 + b d + c over (distance, rssi) pairs.
// Needs at least 3 points with 3 distinct distances.
QuadraticFit fit_quadratic(std::span<const std::pair<double, double>> calibration);

struct GenerationSpec {
    Scenario scenario;
    LogNormalParams params;
    int readings_per_sample = 20;   // m
    int instances_per_rp = 10;
    std::uint64_t seed = 0;
};

// (stream_id + 1)-th output of a SplitMix64 sequence seeded with `master`;
// distinct stream_ids yield independent sub-seeds.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream_id);

// Standard normal variates from mt19937_64 via Box-Muller. Exactly two engine
// draws per variate (u1 in (0,1], u2 in [0,1); z = sqrt(-2 ln u1) cos(2 pi u2)),
// so the stream layout is fixed and portable.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
};

// Synthetic raw datasets with the testbed's shape. One matrix per
// (rp, instance); each reading is the log-normal model at the RP-AP distance
// plus fresh shadowing noise, rounded half-away-from-zero to integer dBm.
// RP r uses the sub-stream seeded with derive_stream_seed(seed, r); draws
// within an RP follow instance -> reading -> ap order. Samples are returned
// grouped by RP in scenario order. Rejects an AP coincident with an RP.
std::vector<LabeledSample> generate_dataset(const GenerationSpec& spec);          // OpenMP over RPs
std::vector<LabeledSample> generate_dataset_serial(const GenerationSpec& spec);   // reference

}  // namespace indoorloc
