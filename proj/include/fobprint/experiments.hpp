#pragma once

#include "fobprint/dataset.hpp"
#include "fobprint/detector.hpp"
#include "fobprint/features.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fobprint {

// Named end-to-end scenarios with pinned profiles.
std::vector<std::string> experiment_preset_names();
bool is_experiment_preset(const std::string& name);
ScenarioConfig make_preset(const std::string& name);  // ParseError on unknown names

struct ExperimentOptions {
    std::string system = "pkes";
    double threshold_knn = 0.0;  // 0 = system/modulation default
    double threshold_svm = 0.0;
    bool tune_amplification = true;
    TrainOptions train;
};

struct SetOutcome {
    std::vector<double> z;           // per capture; failed extractions carry +inf
    std::vector<bool> rejected;      // failed extractions are rejected
    std::size_t failures = 0;        // captures that failed generation or extraction
    double median_z = 0.0;           // over successfully scored captures
};

struct ScorerOutcome {
    double threshold = 0.0;
    NpcParams npc;
    SetOutcome legit;
    std::map<std::string, SetOutcome> attacks;           // by attack set name
    std::map<std::string, ConfusionMetrics> metrics;     // legit vs each attack set
};

struct AmplificationTuning {
    double distance_m = 0.0;
    double mean_snr_db = 0.0;
    double legit_mean_snr_db = 0.0;
    bool within_half_db = false;
};

struct PlaybackPairing {
    std::size_t replica_brighter = 0;  // pairs where the replayed copy is brighter
    std::size_t total = 0;
};

struct FeatureRanking {
    std::vector<double> weights;        // per feature column
    std::vector<std::string> ranked;    // names, best first
};

struct ExperimentResult {
    std::string preset;       // empty when run from an ad-hoc config
    std::string system;
    ScenarioConfig scenario;  // includes any tuned attack parameters
    std::vector<std::string> feature_names;
    ScorerOutcome knn;
    ScorerOutcome svm;
    std::map<std::string, FeatureRanking> ranking;            // per attack set
    std::map<std::string, AmplificationTuning> amp_tuning;    // per amplification set
    std::map<std::string, PlaybackPairing> playback_pairs;    // per playback set
};

// Generate, train both scorers, calibrate, score, and summarize. Deterministic
// for a given (config, options): machine reports serialize byte-identically.
ExperimentResult run_experiment(const ScenarioConfig& cfg, const ExperimentOptions& opts,
                                const std::string& preset_name = "");

std::string report_to_json_text(const ExperimentResult& r);
std::string report_to_csv_text(const ExperimentResult& r);  // per-capture z rows
// Writes report.json and scores.csv under out_dir.
void write_report_files(const ExperimentResult& r, const std::string& out_dir);

struct BenchResult {
    double synth_ms = 0.0;
    double filter_ms = 0.0;
    double demodulate_ms = 0.0;
    double segment_ms = 0.0;
    double features_ms = 0.0;
    double knn_score_ms = 0.0;
    double svm_score_ms = 0.0;
    double detect_path_ms = 0.0;  // filter through score, the per-decision cost
};

BenchResult run_bench(const ScenarioConfig& cfg);
std::string bench_to_text(const BenchResult& b);

} // namespace fobprint
