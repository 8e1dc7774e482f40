#include "fairmask/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fairmask {

namespace {

// Rethrow with the pipeline stage name so the CLI can report which step
// failed.
template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

RawTable subset_rows(const RawTable& table, const std::vector<std::size_t>& rows) {
    RawTable out;
    out.header = table.header;
    for (std::size_t r : rows) {
        out.rows.push_back(table.rows[r]);
        out.source_row_numbers.push_back(table.source_row_numbers[r]);
    }
    return out;
}

}  // namespace

PreparedSplit prepare_split(const RawTable& table, const DatasetSchema& schema,
                            SplitFractions fractions, std::uint64_t seed) {
    std::vector<int> labels;
    const std::size_t label_idx = table.column_index(schema.label_column);
    labels.reserve(table.rows.size());
    for (const auto& row : table.rows)
        labels.push_back(row[label_idx] == schema.positive_label ? 1 : 0);
    const auto parts = split_indices(labels, fractions, seed);

    const RawTable train_raw = subset_rows(table, parts[0]);
    auto fitted = fit_preprocess(train_raw, schema);

    PreparedSplit out;
    out.split.seed = seed;
    out.split.train = std::move(fitted.dataset);
    out.split.validation = apply_preprocess(subset_rows(table, parts[1]), schema, fitted.plan);
    out.split.test = apply_preprocess(subset_rows(table, parts[2]), schema, fitted.plan);
    out.mask = fitted.plan.mask_spec();
    return out;
}

PreparedSplit prepare_split(const Dataset& d, std::optional<MaskSpec> mask,
                            SplitFractions fractions, std::uint64_t seed) {
    PreparedSplit out;
    out.split = split_dataset(d, fractions, seed);
    out.mask = mask ? *mask : MaskSpec::zeros(d);
    return out;
}

EvalFrame make_eval_frame(const ScoreModel& candidate, const ScoreModel& reference,
                          const Dataset& test) {
    EvalFrame f;
    f.labels = test.labels;
    f.predictions = predict_decisions(candidate, test);
    f.candidate_scores = predict_scores(candidate, test);
    f.reference_scores = predict_scores(reference, test);
    f.group = test.group_id;
    f.protected_flag = test.protected_flags();
    return f;
}

namespace {

FairnessReport evaluate_model(const std::string& name, const ScoreModel& model,
                              const ScoreModel& reference, bool is_reference,
                              const Dataset& test, const CompareConfig& cfg) {
    EvalFrame f = make_eval_frame(model, reference, test);
    FairnessReport report;
    report.algorithm = name;
    report.accuracy = accuracy(f);
    const auto adm = admittance(f);
    report.admit_protected = adm.admit_protected;
    report.admit_unprotected = adm.admit_unprotected;
    report.group_discr = group_discrimination(f);
    if (!is_reference) {
        std::size_t biggest_group = 0;
        {
            std::vector<std::size_t> counts;
            for (int g : f.group) {
                if (static_cast<std::size_t>(g) >= counts.size())
                    counts.resize(static_cast<std::size_t>(g) + 1, 0);
                counts[static_cast<std::size_t>(g)]++;
            }
            for (std::size_t c : counts) biggest_group = std::max(biggest_group, c);
        }
        if (biggest_group <= cfg.exact_pair_limit) {
            report.latent_discr = latent_discrimination(f);
            report.strict_latent_discr = strict_latent_discrimination(f);
        } else {
            const auto est = pair_subsample_ld(f, cfg.subsample_pairs, cfg.seed);
            report.latent_discr = est.value;
            report.latent_std_error = est.std_error;
            report.notes.push_back("latent metric estimated from " +
                                   std::to_string(cfg.subsample_pairs) + " sampled pairs");
        }
    }
    for (const auto& w : model.warnings) report.notes.push_back(w);
    return report;
}

}  // namespace

ComparisonRun compare_once(const PreparedSplit& prepared, const CompareConfig& cfg) {
    const Dataset& train = prepared.split.train;
    const Dataset& validation = prepared.split.validation;
    const Dataset& test = prepared.split.test;

    ComparisonRun run;
    run.seed = prepared.split.seed;

    TrainConfig tc = cfg.train;
    tc.seed = prepared.split.seed;

    const ScoreModel h_star =
        stage("train.unconstrained", [&] { return unconstrained(train, cfg.family, tc, cfg.arch); });
    run.rows.push_back(stage("evaluate.unconstrained", [&] {
        return evaluate_model("unconstrained", h_star, h_star, true, test, cfg);
    }));

    const ScoreModel omit = stage("train.omit_sensitive",
                                  [&] { return omit_sensitive(train, cfg.family, tc, cfg.arch); });
    run.rows.push_back(stage("evaluate.omit_sensitive", [&] {
        return evaluate_model("omit_sensitive", omit, h_star, false, test, cfg);
    }));

    const ScoreModel maj = stage("train.majority", [&] { return majority(train); });
    run.rows.push_back(stage("evaluate.majority", [&] {
        return evaluate_model("majority", maj, h_star, false, test, cfg);
    }));

    if (train.sensitive_index_set.size() == 1) {
        const MassageResult massaged = stage("train.massage", [&] {
            return massage(train, tc, cfg.family, tc, cfg.arch);
        });
        auto row = stage("evaluate.massage", [&] {
            return evaluate_model("massage", massaged.model, h_star, false, test, cfg);
        });
        row.massage_promotions = massaged.promotions;
        row.massage_demotions = massaged.demotions;
        run.rows.push_back(std::move(row));
    }

    const ScoreModel fair = stage("train.train_then_mask", [&] {
        const TauGrid grid = cfg.tau_grid
                                 ? *cfg.tau_grid
                                 : TauGrid::covering(h_star, validation, prepared.mask,
                                                     cfg.tau_grid_count);
        ScoreModel m = h_star;
        m.tau = select_tau(m, validation, prepared.mask, grid);
        m.mask = prepared.mask;
        return m;
    });
    run.rows.push_back(stage("evaluate.train_then_mask", [&] {
        auto row = evaluate_model("train_then_mask", fair, h_star, false, test, cfg);
        if (cfg.consistency_k) {
            std::vector<double> base(test.n_rows);
            for (std::size_t r = 0; r < test.n_rows; ++r) base[r] = fair.score(test.row(r));
            row.consistency_points = knn_consistency(base, fair.tau, test, *cfg.consistency_k);
        }
        return row;
    }));
    return run;
}

namespace {

ComparisonResult aggregate_runs(std::vector<ComparisonRun> runs) {
    ComparisonResult result;
    result.runs = std::move(runs);
    const auto& first = result.runs.front().rows;
    for (std::size_t i = 0; i < first.size(); ++i) {
        FairnessReport mean;
        mean.algorithm = first[i].algorithm;
        double n = static_cast<double>(result.runs.size());
        double lat = 0.0, strict = 0.0;
        bool has_lat = first[i].latent_discr.has_value();
        bool has_strict = first[i].strict_latent_discr.has_value();
        for (const auto& run : result.runs) {
            const auto& row = run.rows.at(i);
            if (row.algorithm != mean.algorithm)
                throw std::logic_error("aggregate: algorithm order changed between runs");
            mean.accuracy += row.accuracy / n;
            mean.admit_protected += row.admit_protected / n;
            mean.admit_unprotected += row.admit_unprotected / n;
            mean.group_discr += row.group_discr / n;
            if (row.latent_discr) lat += *row.latent_discr / n;
            if (row.strict_latent_discr) strict += *row.strict_latent_discr / n;
            if (row.massage_promotions) mean.massage_promotions = row.massage_promotions;
            if (row.massage_demotions) mean.massage_demotions = row.massage_demotions;
        }
        if (has_lat) mean.latent_discr = lat;
        if (has_strict) mean.strict_latent_discr = strict;
        // scatter points are per-seed data, only meaningful unaveraged
        if (result.runs.size() == 1) mean.consistency_points = first[i].consistency_points;
        result.mean_rows.push_back(std::move(mean));
    }
    return result;
}

}  // namespace

ComparisonResult run_comparison(const RawTable& table, const DatasetSchema& schema,
                                const CompareConfig& cfg) {
    std::vector<ComparisonRun> runs;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, cfg.repeats); ++r) {
        const auto prepared =
            stage("split", [&] { return prepare_split(table, schema, cfg.fractions,
                                                      cfg.seed + r); });
        runs.push_back(compare_once(prepared, cfg));
    }
    auto result = aggregate_runs(std::move(runs));
    if (schema.sensitive_columns.size() > 1)
        result.notes.push_back("massage skipped: defined for a single sensitive column only");
    return result;
}

ComparisonResult run_comparison(const Dataset& d, std::optional<MaskSpec> mask,
                                const CompareConfig& cfg) {
    std::vector<ComparisonRun> runs;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, cfg.repeats); ++r) {
        const auto prepared =
            stage("split", [&] { return prepare_split(d, mask, cfg.fractions, cfg.seed + r); });
        runs.push_back(compare_once(prepared, cfg));
    }
    auto result = aggregate_runs(std::move(runs));
    if (d.sensitive_index_set.size() > 1)
        result.notes.push_back("massage skipped: defined for a single sensitive column only");
    return result;
}

std::string render_report_table(const ComparisonResult& result) {
    std::ostringstream out;
    char buf[64];
    out << "algorithm            Acc      Adm1     Adm0     G_Discr  L_Discr   strict_L\n";
    for (const auto& row : result.mean_rows) {
        std::snprintf(buf, sizeof(buf), "%-20s %.6f %.6f %.6f %.6f", row.algorithm.c_str(),
                      row.accuracy, row.admit_protected, row.admit_unprotected, row.group_discr);
        out << buf;
        if (row.latent_discr) {
            std::snprintf(buf, sizeof(buf), " %.6f", *row.latent_discr);
            out << buf;
        } else {
            out << " -       ";
        }
        if (row.strict_latent_discr) {
            std::snprintf(buf, sizeof(buf), " %.6f", *row.strict_latent_discr);
            out << buf;
        } else if (row.latent_std_error) {
            std::snprintf(buf, sizeof(buf), " (se %.2g)", *row.latent_std_error);
            out << buf;
        } else {
            out << " -";
        }
        if (row.massage_promotions || row.massage_demotions)
            out << "  flips +" << (row.massage_promotions ? *row.massage_promotions : 0) << "/-"
                << (row.massage_demotions ? *row.massage_demotions : 0);
        out << '\n';
    }
    for (const auto& note : result.notes) out << "note: " << note << '\n';
    return out.str();
}

}  // namespace fairmask
