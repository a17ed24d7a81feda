#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbm/models.hpp"
#include "cbm/stats.hpp"

namespace cbm {

constexpr int kSchemaVersion = 1;

// RNG stream tags. Trial t of model m uses stream_seed(seed, t, tag).
enum StreamTag : std::uint64_t {
    kTagPlanted = 1,
    kTagNull = 2,
    kTagStatP = 3,
    kTagStatQ = 4,
};

struct SweepConfig {
    ModelParams base;
    std::vector<double> s_grid;
    int aleph = 8;
    int trials = 200;
    std::uint64_t seed = 1;
    TreeMethod method = TreeMethod::exact;
    int reps = 0;  // color coding only; 0 selects default_reps
    double C = 0.5;

    void validate() const;
};

struct DetectionRow {
    double s = 0.0;
    double mean_P = 0.0;
    double sd_P = 0.0;
    double mean_Q = 0.0;
    double sd_Q = 0.0;
    double z_separation = 0.0;
    double type_I = 0.0;   // null declared planted
    double type_II = 0.0;  // planted declared null
    double tau = 0.0;
    int trials = 0;
    bool degenerate = false;  // zero spread in both models
    std::vector<double> values_P;
    std::vector<double> values_Q;
};

struct ReferenceLines {
    double sqrt_alpha = 0.0;
    double ks_s = 0.0;  // 1/(lambda eps^2), infinite at eps = 0
};

struct ExperimentResult {
    SweepConfig config;
    std::vector<DetectionRow> per_s;
    ReferenceLines reference;
};

ReferenceLines reference_lines(const ModelParams& p);

// Progress callback receives (trial, model tag) after each statistic.
using TrialHook = std::function<void(int, StreamTag)>;

DetectionRow run_detection(const ModelParams& p, int aleph, int trials, std::uint64_t seed, TreeMethod method,
                           int reps, double C, const TrialHook& hook = {});
ExperimentResult sweep(const SweepConfig& cfg, const TrialHook& hook = {});

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

void write_csv(std::ostream& os, const ExperimentResult& r);
nlohmann::json to_json(const ExperimentResult& r);

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerificationReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

struct VerifyOptions {
    // Multiplies the cycle intensity used by the Poisson check; anything
    // other than 1 should make that check fail.
    double cycle_intensity_scale = 1.0;
};

VerificationReport run_verification_suite(std::uint64_t seed, const VerifyOptions& opt = {});
nlohmann::json to_json(const VerificationReport& r);

}  // namespace cbm
