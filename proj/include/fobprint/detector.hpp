#pragma once

#include "fobprint/rng.hpp"
#include "fobprint/types.hpp"

#include <string>
#include <vector>

namespace fobprint {

using FeatureMatrix = std::vector<std::vector<double>>;

struct NormParams {
    std::vector<double> mean;
    std::vector<double> stdev;  // zero-variance columns recorded as 1.0
};

// Column means and population standard deviations. A zero-variance column
// gets unit scale and a one-time warning on stderr.
NormParams fit_norm(const FeatureMatrix& x);
std::vector<double> apply_norm(const NormParams& p, const std::vector<double>& v);

enum class ScorerKind { knn, svm };
const char* scorer_name(ScorerKind k);
ScorerKind scorer_from_name(const std::string& s);

struct TrainOptions {
    int knn_k = 1;
    double nu = 0.05;
    double svm_tol = 1e-6;
    std::size_t svm_max_iter = 200000;
};

// Mean Euclidean distance to the k nearest training vectors, in standardized
// feature space. Rows are stored standardized.
struct KnnScorer {
    int k = 1;
    NormParams norm;
    FeatureMatrix train_std;

    double score(const std::vector<double>& raw) const;
};

// One-class nu-SVM (RBF), trained by maximal-violating-pair SMO on the dual
//   min 1/2 a'Qa,  0 <= a_i <= 1/(nu*n),  sum a_i = 1.
// score(x) = rho - sum_i a_i K(sv_i, x); positive values are outlier-side.
struct SvmScorer {
    double nu = 0.05;
    double gamma = 0.0;
    double rho = 0.0;
    NormParams norm;
    FeatureMatrix sv_std;
    std::vector<double> alpha;

    double score(const std::vector<double>& raw) const;
};

KnnScorer train_knn(const FeatureMatrix& x, const TrainOptions& opts = {});
SvmScorer train_svm(const FeatureMatrix& x, const TrainOptions& opts = {});

// Score normalization fitted on held-out folds: `rounds` random 90/10 splits,
// a scorer trained on each 90% side, held-out raw scores pooled, mu/sigma
// taken over the pool (population sigma, floored at 1e-9).
struct NpcParams {
    double mu = 0.0;
    double sigma = 1.0;
};

NpcParams npc_calibrate(const FeatureMatrix& x, ScorerKind kind, const TrainOptions& opts,
                        Rng& rng, int rounds = 10, double holdout = 0.1);

struct DetectorModel {
    std::string system = "pkes";  // "pkes" or "rke"
    ScorerKind kind = ScorerKind::knn;
    Modulation modulation = Modulation::fsk;
    TrainOptions opts;
    std::vector<std::string> feature_names;   // extractor's full column names
    std::vector<std::size_t> feature_subset;  // columns the scorer actually uses
    KnnScorer knn;
    SvmScorer svm;
    NpcParams npc;
    double threshold = 4.0;  // reject when |score - mu|/sigma exceeds this
};

double default_threshold(const std::string& system, ScorerKind kind, Modulation mod);

// Trains the chosen scorer on legitimate vectors only and calibrates the
// score normalizer. An "rke" system keeps just the peak-frequency and
// spectral-brightness columns; "pkes" uses all of them.
DetectorModel train_detector(const FeatureMatrix& legit, const std::string& system,
                             ScorerKind kind, Modulation mod,
                             const std::vector<std::string>& feature_names, double threshold,
                             const TrainOptions& opts, Rng& rng);

std::vector<double> select_features(const DetectorModel& m, const std::vector<double>& full);
double raw_score(const DetectorModel& m, const std::vector<double>& full);
double z_score(const DetectorModel& m, const std::vector<double>& full);

struct Verdict {
    double z = 0.0;
    bool reject = false;
};

Verdict detect_single(const DetectorModel& m, const std::vector<double>& full);

// Majority vote over the preambles of one packet train (1..5 of them):
// reject when more than floor(N/2) individual preambles are flagged.
struct GroupVerdict {
    std::vector<double> z;
    std::size_t flagged = 0;
    bool reject = false;
};

GroupVerdict detect_group(const DetectorModel& m, const FeatureMatrix& group);

void save_model(const DetectorModel& m, const std::string& path);
DetectorModel load_model(const std::string& path);

// Positive class = attack: TP is a rejected attack, FP a rejected legitimate
// capture. Rates over an empty population: FPR/FNR 0, TPR/TNR 1.
struct ConfusionMetrics {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    double fpr = 0.0, fnr = 0.0, tpr = 1.0, tnr = 1.0;
};

ConfusionMetrics compute_metrics(const std::vector<bool>& legit_rejected,
                                 const std::vector<bool>& attack_rejected);

// Multi-class ReliefF feature weights (k neighbors, every instance used).
// Distances in standardized space, per-dimension diffs normalized by the raw
// column range. Any class smaller than two instances is an error.
std::vector<double> relieff_weights(const FeatureMatrix& x, const std::vector<int>& labels,
                                    int k = 10);

// Indices sorted by descending weight; ties keep the lower index first.
std::vector<std::size_t> rank_features(const std::vector<double>& weights);

} // namespace fobprint
