#pragma once

#include <string>
#include <vector>

#include "fairmask/dataset.hpp"
#include "fairmask/score_model.hpp"
#include "fairmask/train.hpp"

namespace fairmask {

struct TauGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 101;

    std::vector<double> values() const;
    void validate() const;

    // Grid spanning every achievable decision boundary for this model on
    // this data: [1/2 - max masked score, 1/2 - min masked score].
    static TauGrid covering(const ScoreModel& model, const Dataset& d, const MaskSpec& spec,
                            std::size_t count = 101);
};

struct TauSweepPoint {
    double tau = 0.0;
    double accuracy = 0.0;
    double group_discr = 0.0;  // gap for the designated (first) sensitive column
    bool on_frontier = false;
    std::vector<double> column_gaps;  // marginal gap per sensitive column
};

struct TauSweepResult {
    std::vector<TauSweepPoint> points;
    double tau_star = 0.0;
    TauGrid grid_spec;
};

// Copy of d with every sensitive column overwritten by its reference value.
// Labels and row order are untouched; afterwards all rows share one group.
Dataset mask(const Dataset& d, const MaskSpec& spec);

// Grid tau maximizing decision accuracy over the masked validation rows.
// Ties break toward the smallest |tau|, then the smaller tau.
double select_tau(const ScoreModel& model, const Dataset& validation, const MaskSpec& spec,
                  const TauGrid& grid);

// Trains on ALL features, attaches the mask for every later evaluation, and
// sets tau by select_tau on the validation set. The returned model's
// decisions are constant in the sensitive columns.
ScoreModel train_then_mask(const Dataset& train, const Dataset& validation, const MaskSpec& spec,
                           ModelFamily family, const TrainConfig& cfg, const TauGrid& grid,
                           const MlpArchitecture& arch = {});

// One point per grid tau: decisions come from masked scores, group
// membership from the ORIGINAL sensitive values. Throws when a sensitive
// column has only one observed group.
TauSweepResult tau_sweep(const ScoreModel& model, const Dataset& eval_data, const MaskSpec& spec,
                         const TauGrid& grid);

// Marks the mutually non-dominated points (>= accuracy and <= group_discr,
// at least one strict).
void flag_pareto_frontier(std::vector<TauSweepPoint>& points);

// Delimited export, columns: tau, accuracy, group_discr, on_frontier.
std::string export_sweep_table(const TauSweepResult& result, bool marker_row = true);

}  // namespace fairmask
