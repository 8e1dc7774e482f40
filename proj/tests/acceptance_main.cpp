// Acceptance suite: one pass/fail line per criterion, non-zero exit if any
// fail. Run it via ctest (test name "acceptance") or directly; pass
// --adult <csv> [--adult-schema <file>] to also exercise the documented
// Adult-format band check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fairmask/baselines.hpp"
#include "fairmask/cli_commands.hpp"
#include "fairmask/fairness.hpp"
#include "fairmask/fixtures.hpp"
#include "fairmask/metrics.hpp"
#include "fairmask/preprocess.hpp"
#include "fairmask/report.hpp"
#include "fairmask/rng.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace fairmask;

namespace {

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::string&)> run;
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

#define REQUIRE_OR_FAIL(cond, what)                       \
    do {                                                  \
        if (!(cond)) {                                    \
            detail = std::string("failed: ") + (what);    \
            return false;                                 \
        }                                                 \
    } while (0)

Dataset standardized_toy() {
    Dataset d = toy_table2();
    for (std::size_t c = 1; c < d.n_cols; ++c) {
        double mean = 0, ss = 0;
        for (std::size_t r = 0; r < d.n_rows; ++r) mean += d.at(r, c);
        mean /= static_cast<double>(d.n_rows);
        for (std::size_t r = 0; r < d.n_rows; ++r)
            ss += (d.at(r, c) - mean) * (d.at(r, c) - mean);
        const double sd = std::sqrt(ss / static_cast<double>(d.n_rows));
        for (std::size_t r = 0; r < d.n_rows; ++r) d.at(r, c) = (d.at(r, c) - mean) / sd;
    }
    return d;
}

// fit h*, select tau on validation, attach the mask
ScoreModel fit_train_then_mask(const Split& split, const MaskSpec& spec, ModelFamily fam,
                               const TrainConfig& cfg, const ScoreModel& h_star) {
    ScoreModel fair = h_star;
    const TauGrid grid = TauGrid::covering(h_star, split.validation, spec);
    fair.tau = select_tau(fair, split.validation, spec, grid);
    fair.mask = spec;
    return fair;
}

TrainConfig quick_config(std::uint64_t seed, std::size_t epochs = 250) {
    TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.seed = seed;
    return cfg;
}

// The random instances the exactness criteria run over: synthetic draws
// with varying correlation, plus noisy generic datasets.
std::vector<Dataset> exactness_fixtures(std::size_t count) {
    std::vector<Dataset> out;
    out.push_back(standardized_toy());
    for (std::size_t i = 0; i < count; ++i) {
        if (i % 2 == 0) {
            SyntheticSpec spec;
            spec.n = 120;
            spec.rho = -0.9 + 1.8 * static_cast<double>(i) / static_cast<double>(count);
            spec.base_rate_protected = 0.3;
            spec.base_rate_unprotected = 0.55;
            spec.seed = 1000 + i;
            out.push_back(synthesize(spec));
        } else {
            out.push_back(testutil::random_dataset(2000 + i, 100 + (i % 7) * 10, 2 + i % 3));
        }
    }
    return out;
}

bool criterion_theorem3(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    const auto fixtures = exactness_fixtures(50);
    std::size_t checked = 0;
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        // tiny fixtures (the toy set) are trained and evaluated in-sample;
        // a 2-row test part has no within-group pairs to measure
        Split split;
        if (fixtures[i].n_rows < 30)
            split = Split{fixtures[i], fixtures[i], fixtures[i], i};
        else
            split = split_dataset(fixtures[i], {0.6, 0.2, 0.2}, i);
        const MaskSpec spec = MaskSpec::zeros(fixtures[i]);
        for (ModelFamily fam : {ModelFamily::logistic, ModelFamily::linear_svm}) {
            const TrainConfig cfg = quick_config(i, 200);
            const auto h_star = unconstrained(split.train, fam, cfg);
            const auto fair = fit_train_then_mask(split, spec, fam, cfg, h_star);
            const EvalFrame f = make_eval_frame(fair, h_star, split.test);
            const double ld = latent_discrimination(f);
            const double sld = strict_latent_discrimination(f);
            REQUIRE_OR_FAIL(ld == 0.0, "L_Discr " + std::to_string(ld) + " on fixture " +
                                           std::to_string(i) + " " + family_name(fam));
            REQUIRE_OR_FAIL(sld == 0.0, "strict L_Discr " + std::to_string(sld) +
                                            " on fixture " + std::to_string(i));
            ++checked;
        }
    }
    const double secs = elapsed_s(start);
    REQUIRE_OR_FAIL(secs < 60.0, "runtime " + std::to_string(secs) + "s exceeds 1 min");
    detail = std::to_string(checked) + " model/fixture pairs exact-zero in " +
             std::to_string(secs).substr(0, 4) + "s";
    return true;
}

bool criterion_theorem1(std::string& detail) {
    const auto fixtures = exactness_fixtures(10);
    Rng rng(4242);
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto& d = fixtures[i];
        const TrainConfig cfg = quick_config(i, 150);
        const auto h_star = unconstrained(d, ModelFamily::logistic, cfg);
        const auto constant = majority(d);
        const EvalFrame f = make_eval_frame(constant, h_star, d);
        REQUIRE_OR_FAIL(latent_discrimination(f) == 0.0,
                        "constant classifier latent != 0 on fixture " + std::to_string(i));
        // explicit fairness: any two rows equal in non-sensitive features
        // (here: any rows at all) get the same decision
        for (int t = 0; t < 50; ++t) {
            std::vector<double> x(d.n_cols), y(d.n_cols);
            for (auto& v : x) v = rng.next_normal();
            y = x;
            y[d.sensitive_index_set[0]] = 1.0 - y[d.sensitive_index_set[0]];
            REQUIRE_OR_FAIL(constant.decide(x) == constant.decide(y),
                            "constant classifier changed a decision");
        }
    }
    detail = "constant classifier exact on " + std::to_string(fixtures.size()) + " fixtures";
    return true;
}

bool criterion_explicit_fairness(std::string& detail) {
    SyntheticSpec spec;
    spec.n = 2600;
    spec.rho = 0.6;
    spec.seed = 31;
    const auto d = synthesize(spec);
    const auto split = split_dataset(d, {0.6, 0.2, 0.2}, 3);
    const MaskSpec mask_spec = MaskSpec::zeros(d);
    const TrainConfig cfg = quick_config(3, 250);

    MlpArchitecture arch;
    arch.hidden_layers = {6, 5, 4};
    TrainConfig mlp_cfg = cfg;
    mlp_cfg.epochs = 60;

    std::vector<ScoreModel> models;
    for (ModelFamily fam : {ModelFamily::logistic, ModelFamily::linear_svm, ModelFamily::mlp}) {
        const TrainConfig& c = fam == ModelFamily::mlp ? mlp_cfg : cfg;
        const auto h_star = unconstrained(split.train, fam, c, arch);
        models.push_back(fit_train_then_mask(split, mask_spec, fam, c, h_star));
        models.push_back(omit_sensitive(split.train, fam, c, arch));
    }

    Rng rng(777);
    const auto& test = split.test;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t r = static_cast<std::size_t>(rng.next_below(test.n_rows));
        std::vector<double> flipped(test.row(r).begin(), test.row(r).end());
        for (std::size_t c : test.sensitive_index_set)
            flipped[c] = rng.next_double() < 0.5 ? 0.0 : 1.0;
        for (const auto& m : models)
            REQUIRE_OR_FAIL(m.decide(test.row(r)) == m.decide(flipped),
                            "a decision changed under a sensitive flip");
    }
    detail = "1000 sensitive flips, decisions unchanged (mask + omit, all three families)";
    return true;
}

bool criterion_tau_optimality(std::string& detail) {
    for (std::uint64_t i = 0; i < 20; ++i) {
        auto d = testutil::random_dataset(3000 + i, 60 + (i % 5) * 30, 2 + i % 2);
        const TrainConfig cfg = quick_config(i, 150);
        const auto h_star = unconstrained(d, ModelFamily::logistic, cfg);
        const MaskSpec spec = MaskSpec::zeros(d);
        const TauGrid grid = TauGrid::covering(h_star, d, spec, 101);
        const double tau = select_tau(h_star, d, spec, grid);

        const auto masked = mask(d, spec);
        std::vector<double> scores;
        for (std::size_t r = 0; r < masked.n_rows; ++r)
            scores.push_back(h_star.score(masked.row(r)));
        const auto oracle_best = oracle::exhaustive_threshold_sweep(scores, d.labels);

        std::size_t correct = 0;
        for (std::size_t r = 0; r < masked.n_rows; ++r) {
            const int yhat = scores[r] + tau > 0.5 ? 1 : 0;
            correct += yhat == d.labels[r];
        }
        const double grid_acc =
            static_cast<double>(correct) / static_cast<double>(d.n_rows);

        const auto taus = grid.values();
        double worst_cell = 0.0;
        for (std::size_t g = 0; g + 1 < taus.size(); ++g) {
            const double lo = 0.5 - taus[g + 1], hi = 0.5 - taus[g];
            std::size_t inside = 0;
            for (double s : scores) inside += (s >= lo && s <= hi);
            worst_cell = std::max(
                worst_cell, static_cast<double>(inside) / static_cast<double>(d.n_rows));
        }
        REQUIRE_OR_FAIL(grid_acc >= oracle_best.best_accuracy - worst_cell - 1e-12,
                        "instance " + std::to_string(i) + ": grid " + std::to_string(grid_acc) +
                            " vs oracle " + std::to_string(oracle_best.best_accuracy) +
                            " (cell " + std::to_string(worst_cell) + ")");
    }
    detail = "20 instances within one grid cell of the exhaustive oracle";
    return true;
}

bool criterion_rank_preservation(std::string& detail) {
    const auto fixtures = exactness_fixtures(50);
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto& d = fixtures[i];
        const TrainConfig cfg = quick_config(i, 150);
        for (ModelFamily fam : {ModelFamily::logistic, ModelFamily::linear_svm}) {
            const auto h_star = unconstrained(d, fam, cfg);
            ScoreModel fair = h_star;
            fair.mask = MaskSpec::zeros(d);
            const auto ref = predict_scores(h_star, d);
            const auto masked_scores = predict_scores(fair, d);
            std::map<int, std::vector<std::size_t>> groups;
            for (std::size_t r = 0; r < d.n_rows; ++r) groups[d.group_id[r]].push_back(r);
            for (const auto& [gid, rows] : groups) {
                std::vector<double> a, b;
                for (std::size_t r : rows) {
                    a.push_back(ref[r]);
                    b.push_back(masked_scores[r]);
                }
                REQUIRE_OR_FAIL(oracle::min_ranks(a) == oracle::min_ranks(b),
                                "rank vectors differ on fixture " + std::to_string(i) + " " +
                                    family_name(fam) + " group " + std::to_string(gid));
            }
        }
    }
    detail = std::to_string(fixtures.size()) + " datasets, both linear families, ranks equal";
    return true;
}

bool criterion_metric_oracles(std::string& detail) {
    Rng rng(11);
    for (int inst = 0; inst < 40; ++inst) {
        const std::size_t n = 10 + static_cast<std::size_t>(rng.next_below(91));  // <= 100
        EvalFrame f;
        for (std::size_t i = 0; i < n; ++i) {
            f.labels.push_back(static_cast<int>(rng.next_below(2)));
            // coarse quantization makes ties common
            f.reference_scores.push_back(std::round(rng.next_double() * 6.0) / 6.0);
            f.candidate_scores.push_back(std::round(rng.next_double() * 6.0) / 6.0);
            f.group.push_back(static_cast<int>(rng.next_below(3)));
        }
        bool pairs_exist = false;
        std::map<int, int> counts;
        for (int g : f.group) pairs_exist |= ++counts[g] >= 2;
        if (!pairs_exist) continue;
        const double exact =
            oracle::latent_by_enumeration(f.reference_scores, f.candidate_scores, f.group, false);
        const double strict =
            oracle::latent_by_enumeration(f.reference_scores, f.candidate_scores, f.group, true);
        REQUIRE_OR_FAIL(latent_discrimination(f) == exact,
                        "latent mismatch on instance " + std::to_string(inst));
        REQUIRE_OR_FAIL(strict_latent_discrimination(f) == strict,
                        "strict mismatch on instance " + std::to_string(inst));

        // subsampling converges: 30 seeded trials within 3 standard errors
        if (inst < 3) {
            const std::size_t pairs = 3000;
            for (std::uint64_t seed = 100; seed < 130; ++seed) {
                const auto est = pair_subsample_ld(f, pairs, seed);
                const double se =
                    std::sqrt(exact * (1.0 - exact) / static_cast<double>(pairs));
                REQUIRE_OR_FAIL(std::abs(est.value - exact) <= 3.0 * se + 1e-12,
                                "subsample estimate outside 3 standard errors (seed " +
                                    std::to_string(seed) + ")");
            }
        }
    }
    detail = "exact enumeration matched on 40 instances; subsampling within 3 SE";
    return true;
}

bool criterion_toy_reproduction(std::string& detail) {
    // load through the CSV + schema pipeline, not the in-memory fixture
    const auto schema = toy_table2_schema();
    const auto table = parse_csv(toy_table2_csv(), schema);
    const auto fitted = fit_preprocess(table, schema);
    const auto& d = fitted.dataset;
    REQUIRE_OR_FAIL(d.n_rows == 8, "toy fixture row count");

    const auto flags = d.protected_flags();
    double n_p = 0, n_u = 0, pos_p = 0, pos_u = 0;
    for (std::size_t r = 0; r < d.n_rows; ++r) {
        if (flags[r]) {
            n_p += 1;
            pos_p += d.labels[r];
        } else {
            n_u += 1;
            pos_u += d.labels[r];
        }
    }
    REQUIRE_OR_FAIL(pos_p / n_p == 0.75, "protected positive rate");
    REQUIRE_OR_FAIL(pos_u / n_u == 0.50, "unprotected positive rate");

    EvalFrame f;
    f.labels = d.labels;
    f.predictions = d.labels;
    f.protected_flag = flags;
    REQUIRE_OR_FAIL(group_discrimination(f) == 0.25, "label G_Discr");

    // negative sensitive weight, confirmed by an independent 2-D slice grid
    // search at the trained non-sensitive weights
    const TrainConfig cfg = quick_config(0, 2000);
    const auto m = train_logistic(d, cfg);
    const auto& p = m.linear();
    REQUIRE_OR_FAIL(p.weights[0] < 0.0, "trained sensitive weight not negative");
    auto slice_loss = [&](double w0, double b) {
        double loss = 0.0;
        for (std::size_t r = 0; r < d.n_rows; ++r) {
            double z = w0 * d.at(r, 0) + b;
            for (std::size_t c = 1; c < d.n_cols; ++c) z += p.weights[c] * d.at(r, c);
            const double prob = 1.0 / (1.0 + std::exp(-z));
            loss += d.labels[r] == 1 ? -std::log(prob) : -std::log(1.0 - prob);
        }
        return loss / static_cast<double>(d.n_rows) + 0.5 * cfg.l2_penalty * w0 * w0;
    };
    const auto best = oracle::grid_search_2d(-10.0, 10.0, -10.0, 10.0, 400, slice_loss);
    REQUIRE_OR_FAIL(best.w < 0.0, "grid-search oracle disagrees on the sign");
    REQUIRE_OR_FAIL(slice_loss(p.weights[0], p.intercept) <= best.loss + 0.05,
                    "trained point far from the slice optimum");
    detail = "rates (0.75, 0.50), G_Discr 0.25, sensitive weight " +
             std::to_string(p.weights[0]).substr(0, 6) + " (oracle " +
             std::to_string(best.w).substr(0, 6) + ")";
    return true;
}

bool criterion_massage(std::string& detail) {
    // toy: exactly one flipped label
    const Dataset toy = standardized_toy();
    const TrainConfig cfg = quick_config(0, 2000);
    const auto toy_result = massage(toy, cfg, ModelFamily::logistic, cfg);
    std::size_t flips = 0;
    for (std::size_t r = 0; r < toy.n_rows; ++r)
        flips += toy_result.relabeled_train.labels[r] != toy.labels[r];
    REQUIRE_OR_FAIL(flips == 1, "toy flips = " + std::to_string(flips) + ", expected 1");

    // gap bound on toy and synthetic fixtures
    std::vector<Dataset> fixtures{toy};
    for (std::uint64_t s = 0; s < 5; ++s) {
        SyntheticSpec spec;
        spec.n = 400;
        spec.rho = 0.5;
        spec.base_rate_protected = 0.3;
        spec.base_rate_unprotected = 0.6;
        spec.seed = s;
        fixtures.push_back(synthesize(spec));
    }
    for (std::size_t i = 0; i < fixtures.size(); ++i) {
        const auto& d = fixtures[i];
        const auto result = massage(d, quick_config(i, 200), ModelFamily::logistic,
                                    quick_config(i, 200));
        const auto f = d.protected_flags();
        const double n_p = std::count(f.begin(), f.end(), 1);
        const double n_u = static_cast<double>(f.size()) - n_p;
        REQUIRE_OR_FAIL(result.post_gap <= 1.0 / std::min(n_p, n_u) + 1e-12,
                        "gap bound violated on fixture " + std::to_string(i));
    }
    detail = "toy flipped exactly 1 label; gap bound held on all fixtures";
    return true;
}

bool criterion_mlp_gradients(std::string& detail) {
    auto d = testutil::make_dataset(
        {{1, 0.2, -0.5}, {0, -1.1, 0.7}, {1, 0.9, 0.3}, {0, 0.4, -0.8}, {1, -0.3, 1.2}},
        {1, 0, 1, 0, 1});
    MlpArchitecture arch;
    arch.hidden_layers = {6, 5, 4};  // three hidden layers
    arch.activation = Activation::sigmoid;
    TrainConfig cfg = quick_config(5, 2);
    const auto model = train_mlp(d, arch, cfg);
    const auto params = std::get<MlpParams>(model.params);
    const double l2 = 1e-3;
    const auto analytic = mlp_gradient(params, d, l2);
    const auto numeric = oracle::finite_difference_gradient(
        flatten_mlp(params),
        [&](const std::vector<double>& theta) {
            MlpParams probe = params;
            unflatten_mlp(probe, theta);
            return mlp_objective(probe, d, l2);
        },
        1e-5);
    double max_rel = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
        const double denom = std::max({std::abs(analytic[k]), std::abs(numeric[k]), 1e-8});
        max_rel = std::max(max_rel, std::abs(analytic[k] - numeric[k]) / denom);
    }
    REQUIRE_OR_FAIL(max_rel < 1e-4, "max relative error " + std::to_string(max_rel));
    detail = "max relative error " + std::to_string(max_rel) + " over " +
             std::to_string(analytic.size()) + " parameters";
    return true;
}

bool criterion_proxy_demonstration(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    SyntheticSpec spec;
    spec.n = 3000;
    spec.rho = 0.8;
    spec.base_rate_protected = 0.25;
    spec.base_rate_unprotected = 0.55;
    spec.seed = 17;
    const auto d = synthesize(spec);
    const auto split = split_dataset(d, {0.6, 0.2, 0.2}, 5);
    const MaskSpec mask_spec = MaskSpec::zeros(d);
    const TrainConfig cfg = quick_config(5, 300);

    const auto h_star = unconstrained(split.train, ModelFamily::linear_svm, cfg);
    const auto omitted = omit_sensitive(split.train, ModelFamily::linear_svm, cfg);
    const auto fair =
        fit_train_then_mask(split, mask_spec, ModelFamily::linear_svm, cfg, h_star);

    const EvalFrame f_omit = make_eval_frame(omitted, h_star, split.test);
    const EvalFrame f_fair = make_eval_frame(fair, h_star, split.test);
    const EvalFrame f_star = make_eval_frame(h_star, h_star, split.test);

    const double ld_omit = latent_discrimination(f_omit);
    const double ld_fair = latent_discrimination(f_fair);
    const double gd_fair = group_discrimination(f_fair);
    const double gd_star = group_discrimination(f_star);

    REQUIRE_OR_FAIL(ld_omit > 0.0, "omit-sensitive latent discrimination not positive");
    REQUIRE_OR_FAIL(ld_fair == 0.0, "train-then-mask latent discrimination not exactly zero");
    REQUIRE_OR_FAIL(gd_fair < gd_star, "train-then-mask group gap " + std::to_string(gd_fair) +
                                           " !< unconstrained " + std::to_string(gd_star));
    const double secs = elapsed_s(start);
    REQUIRE_OR_FAIL(secs < 120.0, "runtime " + std::to_string(secs) + "s exceeds 2 min");
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "omit L=%.4f > 0, mask L=0 exactly, G: %.3f < %.3f, %.1fs", ld_omit, gd_fair,
                  gd_star, secs);
    detail = buf;
    return true;
}

std::string g_adult_csv;
std::string g_adult_schema;

bool criterion_adult_band(std::string& detail) {
    if (g_adult_csv.empty()) {
        detail = "not exercised: no user-supplied Adult-format data (pass --adult <csv>); "
                 "bands documented in README";
        return true;
    }
    const auto schema =
        g_adult_schema.empty() ? load_schema("schemas/adult.schema") : load_schema(g_adult_schema);
    const auto table = load_csv(g_adult_csv, schema);
    CompareConfig cfg;
    cfg.family = ModelFamily::linear_svm;
    cfg.train.epochs = 400;
    cfg.seed = 0;
    const auto prepared = prepare_split(table, schema, cfg.fractions, cfg.seed);
    const auto run = compare_once(prepared, cfg);
    for (const auto& row : run.rows) {
        if (row.algorithm != "train_then_mask") continue;
        REQUIRE_OR_FAIL(std::abs(row.accuracy - 0.823) <= 0.03,
                        "accuracy " + std::to_string(row.accuracy) + " outside 0.823 +/- 0.03");
        REQUIRE_OR_FAIL(row.latent_discr && *row.latent_discr == 0.0,
                        "latent discrimination not exactly zero");
        detail = "accuracy " + std::to_string(row.accuracy) + " within band, latent exactly 0";
        return true;
    }
    detail = "train_then_mask row missing";
    return false;
}

bool criterion_consistency_shift(std::string& detail) {
    SyntheticSpec spec;
    spec.n = 600;
    spec.rho = 0.4;
    spec.seed = 23;
    const auto d = synthesize(spec);
    const auto split = split_dataset(d, {0.6, 0.2, 0.2}, 9);
    const TrainConfig cfg = quick_config(9, 200);
    ScoreModel model = unconstrained(split.train, ModelFamily::logistic, cfg);
    model.mask = MaskSpec::zeros(d);

    const auto& test = split.test;
    std::vector<double> base(test.n_rows);
    for (std::size_t r = 0; r < test.n_rows; ++r) base[r] = model.score(test.row(r));
    const auto at_zero = knn_consistency(base, 0.0, test, 5);
    const auto at_tau = knn_consistency(base, 0.3, test, 5);
    for (std::size_t i = 0; i < at_zero.size(); ++i) {
        const double d1 = at_tau[i].first - at_zero[i].first;
        const double d2 = at_tau[i].second - at_zero[i].second;
        REQUIRE_OR_FAIL(std::abs(d1 - 0.3) <= 1e-15, "own-score shift off by " +
                                                         std::to_string(d1 - 0.3));
        REQUIRE_OR_FAIL(std::abs(d2 - 0.3) <= 1e-15, "neighbour-mean shift off by " +
                                                         std::to_string(d2 - 0.3));
    }
    detail = std::to_string(at_zero.size()) + " exported pairs shift by exactly 0.3";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--adult") == 0) g_adult_csv = argv[i + 1];
        if (std::strcmp(argv[i], "--adult-schema") == 0) g_adult_schema = argv[i + 1];
    }

    std::vector<Criterion> criteria{
        {1, "train-then-mask latent discrimination exactly zero (linear families)",
         criterion_theorem3},
        {2, "constant classifier is latent-clean and explicitly fair", criterion_theorem1},
        {3, "sensitive flips never change decisions (mask + omit)",
         criterion_explicit_fairness},
        {4, "grid tau* within one cell of the exhaustive boundary oracle",
         criterion_tau_optimality},
        {5, "within-group rank vectors preserved under masking", criterion_rank_preservation},
        {6, "latent metrics match enumeration; subsampling converges",
         criterion_metric_oracles},
        {7, "toy fixture rates (0.75, 0.50), gap 0.25, negative sensitive weight",
         criterion_toy_reproduction},
        {8, "massaging equalizes rates within bound; toy flips one label", criterion_massage},
        {9, "mlp analytic gradient vs central finite differences", criterion_mlp_gradients},
        {10, "rho=0.8 proxying: omit > 0, mask = 0, smaller group gap",
         criterion_proxy_demonstration},
        {11, "Adult-format band check (loose bands, user-supplied data)",
         criterion_adult_band},
        {12, "consistency export shifts by exactly tau", criterion_consistency_shift},
    };

    int failures = 0;
    for (auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %02d %s  %s%s%s\n", c.id, ok ? "PASS" : "FAIL", c.title.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
