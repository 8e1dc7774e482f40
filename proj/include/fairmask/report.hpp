#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairmask/baselines.hpp"
#include "fairmask/dataset.hpp"
#include "fairmask/fairness.hpp"
#include "fairmask/fixtures.hpp"
#include "fairmask/metrics.hpp"
#include "fairmask/preprocess.hpp"
#include "fairmask/train.hpp"

namespace fairmask {

/// One algorithm's evaluation bundle, matching the comparison table
/// columns: Acc, Admit1, Admit0, G_Discr, L_Discr (plus the strict
/// variant). The latent columns are absent for the reference model itself.
struct FairnessReport {
    std::string algorithm;
    double accuracy = 0.0;
    double admit_protected = 0.0;
    double admit_unprotected = 0.0;
    double group_discr = 0.0;
    std::optional<double> latent_discr;
    std::optional<double> strict_latent_discr;
    std::optional<double> latent_std_error;  // set when the pair metric was subsampled
    std::optional<std::vector<std::pair<double, double>>> consistency_points;
    std::optional<std::size_t> massage_promotions;
    std::optional<std::size_t> massage_demotions;
    std::vector<std::string> notes;
};

struct CompareConfig {
    ModelFamily family = ModelFamily::logistic;
    TrainConfig train;
    MlpArchitecture arch;
    SplitFractions fractions;
    std::uint64_t seed = 0;
    std::size_t repeats = 1;
    std::size_t tau_grid_count = 101;
    std::optional<TauGrid> tau_grid;  // unset = grid covering the validation scores
    // beyond this many rows in any one group the exact O(n^2) latent metric
    // switches to seeded pair subsampling
    std::size_t exact_pair_limit = 20000;
    std::size_t subsample_pairs = 10000000;
    // when set, the train_then_mask row carries (own score, knn mean score)
    // pairs computed with this neighbour count
    std::optional<std::size_t> consistency_k;
};

struct PreparedSplit {
    Split split;
    MaskSpec mask;
};

// Split first, then fit the preprocessing plan on the train part only and
// apply it to all three parts.
PreparedSplit prepare_split(const RawTable& table, const DatasetSchema& schema,
                            SplitFractions fractions, std::uint64_t seed);

// For datasets that are already numeric (synthetic fixtures). mask defaults
// to all-zero reference values.
PreparedSplit prepare_split(const Dataset& d, std::optional<MaskSpec> mask,
                            SplitFractions fractions, std::uint64_t seed);

struct ComparisonRun {
    std::uint64_t seed = 0;
    std::vector<FairnessReport> rows;
};

struct ComparisonResult {
    std::vector<FairnessReport> mean_rows;
    std::vector<ComparisonRun> runs;
    std::vector<std::string> notes;
};

// Fixed algorithm order: unconstrained, omit_sensitive, majority, massage
// (single sensitive column only, skipped with a note otherwise),
// train_then_mask. The unconstrained model of the same run is the latent
// reference h*.
ComparisonRun compare_once(const PreparedSplit& prepared, const CompareConfig& cfg);

ComparisonResult run_comparison(const RawTable& table, const DatasetSchema& schema,
                                const CompareConfig& cfg);
ComparisonResult run_comparison(const Dataset& d, std::optional<MaskSpec> mask,
                                const CompareConfig& cfg);

// Builds the evaluation frame for one candidate model on the test set.
EvalFrame make_eval_frame(const ScoreModel& candidate, const ScoreModel& reference,
                          const Dataset& test);

std::string render_report_table(const ComparisonResult& result);

}  // namespace fairmask
