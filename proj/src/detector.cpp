#include "fobprint/detector.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

namespace fobprint {

namespace {

using json = nlohmann::ordered_json;

void check_matrix(const FeatureMatrix& x, std::size_t min_rows, const char* what) {
    if (x.size() < min_rows)
        throw InvalidTrainingSet(std::string(what) + ": needs at least " +
                                 std::to_string(min_rows) + " vectors, got " +
                                 std::to_string(x.size()));
    const std::size_t dim = x.front().size();
    if (dim == 0)
        throw InvalidTrainingSet(std::string(what) + ": zero-dimensional vectors");
    for (const auto& row : x) {
        if (row.size() != dim)
            throw InvalidTrainingSet(std::string(what) + ": inconsistent vector lengths");
        for (double v : row)
            if (!std::isfinite(v))
                throw InvalidTrainingSet(std::string(what) + ": non-finite feature value");
    }
}

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

FeatureMatrix standardize_all(const NormParams& p, const FeatureMatrix& x) {
    FeatureMatrix z;
    z.reserve(x.size());
    for (const auto& row : x) z.push_back(apply_norm(p, row));
    return z;
}

KnnScorer train_knn_impl(const FeatureMatrix& x, const TrainOptions& opts, std::size_t min_rows) {
    check_matrix(x, min_rows, "knn training");
    if (opts.knn_k < 1 || static_cast<std::size_t>(opts.knn_k) > x.size())
        throw InvalidInput("knn training: k out of [1, n]");
    KnnScorer s;
    s.k = opts.knn_k;
    s.norm = fit_norm(x);
    s.train_std = standardize_all(s.norm, x);
    return s;
}

SvmScorer train_svm_impl(const FeatureMatrix& x, const TrainOptions& opts, std::size_t min_rows) {
    check_matrix(x, min_rows, "svm training");
    if (!(opts.nu > 0.0) || opts.nu > 1.0)
        throw InvalidInput("svm training: nu out of (0, 1]");
    const std::size_t n = x.size();
    if (n > 5000)
        throw InvalidTrainingSet("svm training: more than 5000 vectors");

    SvmScorer s;
    s.nu = opts.nu;
    s.norm = fit_norm(x);
    s.gamma = 1.0 / static_cast<double>(x.front().size());
    const FeatureMatrix z = standardize_all(s.norm, x);

    std::vector<double> kern(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kern[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::exp(-s.gamma * sqdist(z[i], z[j]));
            kern[i * n + j] = v;
            kern[j * n + i] = v;
        }
    }

    const double c = 1.0 / (opts.nu * static_cast<double>(n));
    std::vector<double> a(n, 0.0);
    const auto full = static_cast<std::size_t>(std::floor(opts.nu * static_cast<double>(n)));
    for (std::size_t i = 0; i < full && i < n; ++i) a[i] = c;
    const double rem = 1.0 - static_cast<double>(std::min(full, n)) * c;
    if (rem > 0.0 && full < n) a[full] = rem;

    std::vector<double> g(n, 0.0);  // g_i = (Q a)_i
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += kern[i * n + j] * a[j];
        g[i] = acc;
    }

    const double box_eps = 1e-12 * c;
    bool converged = false;
    for (std::size_t iter = 0; iter < opts.svm_max_iter; ++iter) {
        // maximal violating pair: move weight from the highest-gradient
        // up-movable index to the lowest-gradient down-movable one
        std::size_t up = n, down = n;
        double gmin = 0.0, gmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] < c - box_eps && (up == n || g[i] < gmin)) { up = i; gmin = g[i]; }
            if (a[i] > box_eps && (down == n || g[i] > gmax)) { down = i; gmax = g[i]; }
        }
        if (up == n || down == n || gmax - gmin <= opts.svm_tol) {
            converged = true;
            break;
        }
        double eta = kern[up * n + up] + kern[down * n + down] - 2.0 * kern[up * n + down];
        if (eta < 1e-12) eta = 1e-12;
        double delta = (gmax - gmin) / eta;
        delta = std::min({delta, c - a[up], a[down]});
        a[up] += delta;
        a[down] -= delta;
        for (std::size_t t = 0; t < n; ++t)
            g[t] += delta * (kern[t * n + up] - kern[t * n + down]);
    }
    if (!converged)
        throw TrainingFailed("svm training: smo did not converge");

    // rho from free support vectors; otherwise bracket it between the bound groups
    double rho_acc = 0.0;
    std::size_t rho_cnt = 0;
    double upper = std::numeric_limits<double>::infinity();   // min g over a ~ 0
    double lower = -std::numeric_limits<double>::infinity();  // max g over a ~ C
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] > box_eps && a[i] < c - box_eps) {
            rho_acc += g[i];
            ++rho_cnt;
        } else if (a[i] <= box_eps) {
            upper = std::min(upper, g[i]);
        } else {
            lower = std::max(lower, g[i]);
        }
    }
    if (rho_cnt > 0) {
        s.rho = rho_acc / static_cast<double>(rho_cnt);
    } else {
        if (!std::isfinite(upper)) upper = lower;
        if (!std::isfinite(lower)) lower = upper;
        s.rho = 0.5 * (upper + lower);
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] > box_eps) {
            s.sv_std.push_back(z[i]);
            s.alpha.push_back(a[i]);
        }
    }
    if (s.sv_std.empty())
        throw TrainingFailed("svm training: no support vectors retained");
    return s;
}

} // namespace

NormParams fit_norm(const FeatureMatrix& x) {
    check_matrix(x, 1, "normalization");
    const std::size_t dim = x.front().size();
    const auto n = static_cast<double>(x.size());
    NormParams p;
    p.mean.assign(dim, 0.0);
    p.stdev.assign(dim, 0.0);
    for (const auto& row : x)
        for (std::size_t i = 0; i < dim; ++i) p.mean[i] += row[i];
    for (auto& m : p.mean) m /= n;
    for (const auto& row : x)
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = row[i] - p.mean[i];
            p.stdev[i] += d * d;
        }
    for (std::size_t i = 0; i < dim; ++i) {
        p.stdev[i] = std::sqrt(p.stdev[i] / n);
        if (p.stdev[i] == 0.0) {
            std::cerr << "warning: feature column " << i
                      << " has zero variance; scaling by 1\n";
            p.stdev[i] = 1.0;
        }
    }
    return p;
}

std::vector<double> apply_norm(const NormParams& p, const std::vector<double>& v) {
    if (v.size() != p.mean.size())
        throw InvalidInput("normalization: vector length does not match the fitted columns");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - p.mean[i]) / p.stdev[i];
    return out;
}

const char* scorer_name(ScorerKind k) { return k == ScorerKind::knn ? "knn" : "svm"; }

ScorerKind scorer_from_name(const std::string& s) {
    if (s == "knn") return ScorerKind::knn;
    if (s == "svm") return ScorerKind::svm;
    throw ParseError("unknown scorer '" + s + "'");
}

double KnnScorer::score(const std::vector<double>& raw) const {
    const std::vector<double> q = apply_norm(norm, raw);
    std::vector<double> d2;
    d2.reserve(train_std.size());
    for (const auto& row : train_std) d2.push_back(sqdist(row, q));
    const auto kk = static_cast<std::size_t>(k);
    std::partial_sort(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(kk), d2.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < kk; ++i) acc += std::sqrt(d2[i]);
    return acc / static_cast<double>(kk);
}

double SvmScorer::score(const std::vector<double>& raw) const {
    const std::vector<double> q = apply_norm(norm, raw);
    double acc = 0.0;
    for (std::size_t i = 0; i < sv_std.size(); ++i)
        acc += alpha[i] * std::exp(-gamma * sqdist(sv_std[i], q));
    return rho - acc;
}

KnnScorer train_knn(const FeatureMatrix& x, const TrainOptions& opts) {
    return train_knn_impl(x, opts, 10);
}

SvmScorer train_svm(const FeatureMatrix& x, const TrainOptions& opts) {
    return train_svm_impl(x, opts, 10);
}

NpcParams npc_calibrate(const FeatureMatrix& x, ScorerKind kind, const TrainOptions& opts,
                        Rng& rng, int rounds, double holdout) {
    check_matrix(x, 10, "npc calibration");
    if (rounds < 1) throw InvalidInput("npc calibration: rounds must be positive");
    if (!(holdout > 0.0) || holdout >= 0.5)
        throw InvalidInput("npc calibration: holdout fraction out of (0, 0.5)");

    const std::size_t n = x.size();
    auto held = static_cast<std::size_t>(std::ceil(holdout * static_cast<double>(n)));
    held = std::clamp<std::size_t>(held, 1, n - 2);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> pool;
    pool.reserve(static_cast<std::size_t>(rounds) * held);

    for (int r = 0; r < rounds; ++r) {
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(idx[i], idx[j]);
        }
        FeatureMatrix rest;
        rest.reserve(n - held);
        for (std::size_t i = held; i < n; ++i) rest.push_back(x[idx[i]]);
        if (kind == ScorerKind::knn) {
            const KnnScorer s = train_knn_impl(rest, opts, 2);
            for (std::size_t i = 0; i < held; ++i) pool.push_back(s.score(x[idx[i]]));
        } else {
            const SvmScorer s = train_svm_impl(rest, opts, 2);
            for (std::size_t i = 0; i < held; ++i) pool.push_back(s.score(x[idx[i]]));
        }
    }

    NpcParams p;
    for (double v : pool) p.mu += v;
    p.mu /= static_cast<double>(pool.size());
    double var = 0.0;
    for (double v : pool) {
        const double d = v - p.mu;
        var += d * d;
    }
    p.sigma = std::max(std::sqrt(var / static_cast<double>(pool.size())), 1e-9);
    return p;
}

double default_threshold(const std::string& system, ScorerKind kind, Modulation mod) {
    if (mod == Modulation::ask) return 70.0;
    if (system == "rke") return kind == ScorerKind::knn ? 4.5 : 5.0;
    return kind == ScorerKind::knn ? 4.0 : 5.0;
}

DetectorModel train_detector(const FeatureMatrix& legit, const std::string& system,
                             ScorerKind kind, Modulation mod,
                             const std::vector<std::string>& feature_names, double threshold,
                             const TrainOptions& opts, Rng& rng) {
    if (system != "pkes" && system != "rke")
        throw InvalidInput("train_detector: system must be 'pkes' or 'rke'");
    check_matrix(legit, 10, "detector training");
    if (!feature_names.empty() && feature_names.size() != legit.front().size())
        throw InvalidInput("train_detector: feature name count does not match vector length");
    if (!(threshold > 0.0))
        throw InvalidInput("train_detector: threshold must be positive");

    DetectorModel m;
    m.system = system;
    m.kind = kind;
    m.modulation = mod;
    m.opts = opts;
    m.feature_names = feature_names;
    m.threshold = threshold;

    const std::size_t dim = legit.front().size();
    if (system == "rke") {
        // packet trains only expose timing and wideband texture reliably
        for (std::size_t i = 0; i < dim; ++i) {
            const std::string& nm = feature_names.empty() ? std::string() : feature_names[i];
            if (nm == "f_peak_hz" || nm == "spectral_brightness") m.feature_subset.push_back(i);
        }
        if (m.feature_subset.empty())
            throw InvalidInput("train_detector: rke system needs f_peak_hz and "
                               "spectral_brightness columns");
    } else {
        m.feature_subset.resize(dim);
        std::iota(m.feature_subset.begin(), m.feature_subset.end(), 0);
    }

    FeatureMatrix sel;
    sel.reserve(legit.size());
    for (const auto& row : legit) {
        std::vector<double> r;
        r.reserve(m.feature_subset.size());
        for (std::size_t i : m.feature_subset) r.push_back(row[i]);
        sel.push_back(std::move(r));
    }

    if (kind == ScorerKind::knn)
        m.knn = train_knn(sel, opts);
    else
        m.svm = train_svm(sel, opts);
    m.npc = npc_calibrate(sel, kind, opts, rng);
    return m;
}

std::vector<double> select_features(const DetectorModel& m, const std::vector<double>& full) {
    std::vector<double> out;
    out.reserve(m.feature_subset.size());
    for (std::size_t i : m.feature_subset) {
        if (i >= full.size())
            throw InvalidInput("detector: feature vector shorter than the model expects");
        out.push_back(full[i]);
    }
    return out;
}

double raw_score(const DetectorModel& m, const std::vector<double>& full) {
    const std::vector<double> v = select_features(m, full);
    return m.kind == ScorerKind::knn ? m.knn.score(v) : m.svm.score(v);
}

double z_score(const DetectorModel& m, const std::vector<double>& full) {
    return std::abs(raw_score(m, full) - m.npc.mu) / m.npc.sigma;
}

Verdict detect_single(const DetectorModel& m, const std::vector<double>& full) {
    Verdict v;
    v.z = z_score(m, full);
    v.reject = v.z > m.threshold;
    return v;
}

GroupVerdict detect_group(const DetectorModel& m, const FeatureMatrix& group) {
    if (group.empty() || group.size() > 5)
        throw InvalidInput("detect_group: expected 1 to 5 preamble vectors");
    GroupVerdict g;
    for (const auto& row : group) {
        const Verdict v = detect_single(m, row);
        g.z.push_back(v.z);
        if (v.reject) ++g.flagged;
    }
    g.reject = g.flagged > group.size() / 2;
    return g;
}

namespace {

json norm_to_json(const NormParams& p) {
    return json{{"mean", p.mean}, {"stdev", p.stdev}};
}

NormParams norm_from_json(const json& j) {
    NormParams p;
    p.mean = j.at("mean").get<std::vector<double>>();
    p.stdev = j.at("stdev").get<std::vector<double>>();
    if (p.mean.size() != p.stdev.size() || p.mean.empty())
        throw ParseError("model file: malformed normalization block");
    return p;
}

} // namespace

void save_model(const DetectorModel& m, const std::string& path) {
    json j;
    j["format"] = "rf-print-model";
    j["version"] = 1;
    j["system"] = m.system;
    j["scorer"] = scorer_name(m.kind);
    j["modulation"] = modulation_name(m.modulation);
    j["threshold"] = m.threshold;
    j["feature_names"] = m.feature_names;
    j["feature_subset"] = m.feature_subset;
    j["options"] = {{"knn_k", m.opts.knn_k},
                    {"nu", m.opts.nu},
                    {"svm_tol", m.opts.svm_tol},
                    {"svm_max_iter", m.opts.svm_max_iter}};
    j["npc"] = {{"mu", m.npc.mu}, {"sigma", m.npc.sigma}};
    if (m.kind == ScorerKind::knn) {
        j["knn"] = {{"k", m.knn.k}, {"norm", norm_to_json(m.knn.norm)},
                    {"train_std", m.knn.train_std}};
    } else {
        j["svm"] = {{"nu", m.svm.nu},       {"gamma", m.svm.gamma},
                    {"rho", m.svm.rho},     {"norm", norm_to_json(m.svm.norm)},
                    {"alpha", m.svm.alpha}, {"sv_std", m.svm.sv_std}};
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ParseError("model file: cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out)
        throw ParseError("model file: write to '" + path + "' failed");
}

DetectorModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("model file: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("model file: invalid json: " + std::string(e.what()));
    }
    try {
        if (j.at("format").get<std::string>() != "rf-print-model")
            throw ParseError("model file: unrecognized format tag");
        if (j.at("version").get<int>() != 1)
            throw ParseError("model file: unsupported version");
        DetectorModel m;
        m.system = j.at("system").get<std::string>();
        m.kind = scorer_from_name(j.at("scorer").get<std::string>());
        m.modulation = modulation_from_name(j.at("modulation").get<std::string>());
        m.threshold = j.at("threshold").get<double>();
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        m.feature_subset = j.at("feature_subset").get<std::vector<std::size_t>>();
        const auto& o = j.at("options");
        m.opts.knn_k = o.at("knn_k").get<int>();
        m.opts.nu = o.at("nu").get<double>();
        m.opts.svm_tol = o.at("svm_tol").get<double>();
        m.opts.svm_max_iter = o.at("svm_max_iter").get<std::size_t>();
        m.npc.mu = j.at("npc").at("mu").get<double>();
        m.npc.sigma = j.at("npc").at("sigma").get<double>();
        if (m.kind == ScorerKind::knn) {
            const auto& k = j.at("knn");
            m.knn.k = k.at("k").get<int>();
            m.knn.norm = norm_from_json(k.at("norm"));
            m.knn.train_std = k.at("train_std").get<FeatureMatrix>();
            if (m.knn.train_std.empty())
                throw ParseError("model file: empty knn training block");
        } else {
            const auto& s = j.at("svm");
            m.svm.nu = s.at("nu").get<double>();
            m.svm.gamma = s.at("gamma").get<double>();
            m.svm.rho = s.at("rho").get<double>();
            m.svm.norm = norm_from_json(s.at("norm"));
            m.svm.alpha = s.at("alpha").get<std::vector<double>>();
            m.svm.sv_std = s.at("sv_std").get<FeatureMatrix>();
            if (m.svm.sv_std.size() != m.svm.alpha.size() || m.svm.sv_std.empty())
                throw ParseError("model file: malformed svm block");
        }
        return m;
    } catch (const json::exception& e) {
        throw ParseError("model file: missing or mistyped field: " + std::string(e.what()));
    }
}

ConfusionMetrics compute_metrics(const std::vector<bool>& legit_rejected,
                                 const std::vector<bool>& attack_rejected) {
    ConfusionMetrics c;
    for (bool r : legit_rejected) (r ? c.fp : c.tn)++;
    for (bool r : attack_rejected) (r ? c.tp : c.fn)++;
    const std::size_t nl = c.fp + c.tn;
    const std::size_t na = c.tp + c.fn;
    c.fpr = nl ? static_cast<double>(c.fp) / static_cast<double>(nl) : 0.0;
    c.fnr = na ? static_cast<double>(c.fn) / static_cast<double>(na) : 0.0;
    c.tnr = 1.0 - c.fpr;
    c.tpr = 1.0 - c.fnr;
    return c;
}

std::vector<double> relieff_weights(const FeatureMatrix& x, const std::vector<int>& labels,
                                    int k) {
    check_matrix(x, 2, "relieff");
    if (labels.size() != x.size())
        throw InvalidInput("relieff: label count does not match vector count");
    if (k < 1) throw InvalidInput("relieff: k must be positive");

    const std::size_t n = x.size();
    const std::size_t dim = x.front().size();

    std::vector<int> classes;
    for (int c : labels)
        if (std::find(classes.begin(), classes.end(), c) == classes.end()) classes.push_back(c);
    std::vector<std::size_t> count(classes.size(), 0);
    std::vector<std::size_t> cls_idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::find(classes.begin(), classes.end(), labels[i]);
        cls_idx[i] = static_cast<std::size_t>(it - classes.begin());
        ++count[cls_idx[i]];
    }
    for (std::size_t c = 0; c < classes.size(); ++c)
        if (count[c] < 2)
            throw RankingError("relieff: class " + std::to_string(classes[c]) +
                               " has fewer than 2 instances");

    const NormParams norm = fit_norm(x);
    const FeatureMatrix z = standardize_all(norm, x);

    std::vector<double> range(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        double lo = x[0][d], hi = x[0][d];
        for (const auto& row : x) {
            lo = std::min(lo, row[d]);
            hi = std::max(hi, row[d]);
        }
        range[d] = hi - lo;
    }
    auto diff = [&](std::size_t d, std::size_t i, std::size_t j) {
        return range[d] > 0.0 ? std::abs(x[i][d] - x[j][d]) / range[d] : 0.0;
    };

    std::vector<double> prior(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        prior[c] = static_cast<double>(count[c]) / static_cast<double>(n);

    std::vector<double> w(dim, 0.0);
    const double m_inv = 1.0 / static_cast<double>(n);

    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) order[j] = {sqdist(z[i], z[j]), j};
        order[i].first = std::numeric_limits<double>::infinity();  // exclude self
        std::sort(order.begin(), order.end());

        for (std::size_t c = 0; c < classes.size(); ++c) {
            const bool is_hit = c == cls_idx[i];
            const std::size_t avail = is_hit ? count[c] - 1 : count[c];
            const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), avail);
            const double cls_w =
                is_hit ? -1.0 : prior[c] / (1.0 - prior[cls_idx[i]]);
            std::size_t taken = 0;
            for (const auto& [dist, j] : order) {
                if (taken == kk) break;
                if (j == i || cls_idx[j] != c) continue;
                for (std::size_t d = 0; d < dim; ++d)
                    w[d] += cls_w * diff(d, i, j) * m_inv / static_cast<double>(kk);
                ++taken;
            }
        }
    }
    return w;
}

std::vector<std::size_t> rank_features(const std::vector<double>& weights) {
    std::vector<std::size_t> idx(weights.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });
    return idx;
}

} // namespace fobprint
