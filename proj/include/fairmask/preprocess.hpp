#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairmask/csv.hpp"
#include "fairmask/dataset.hpp"
#include "fairmask/score_model.hpp"

namespace fairmask {

/// Frozen encoding for one schema column. Statistics and level lists come
/// from the training split only; applying a plan to data with an unseen
/// categorical level is an error, never a silent zero row.
struct ColumnPlan {
    enum class Action { standardize, one_hot, sensitive_binary };
    std::string name;
    Action action = Action::standardize;

    // standardize
    double mean = 0.0;
    double stddev = 1.0;  // 0 means the column was constant; encoded all-zero

    // one_hot: levels in order of first appearance in train
    std::vector<std::string> levels;

    // sensitive_binary
    std::string protected_level;          // encoded 1 (empty = numeric passthrough)
    std::optional<double> binarize_leq;   // numeric threshold encoding
    double mask_value = 0.0;              // encoding of the schema's mask_reference
};

struct PreprocessPlan {
    std::vector<ColumnPlan> columns;  // schema order, label excluded
    std::string positive_label;
    std::vector<std::string> encoded_column_names;
    std::vector<std::size_t> sensitive_index_set;
    std::vector<std::string> warnings;

    MaskSpec mask_spec() const;
};

struct PreprocessResult {
    Dataset dataset;
    PreprocessPlan plan;
};

// Fits a plan on `table` (which must be the training split) and applies it.
PreprocessResult fit_preprocess(const RawTable& table, const DatasetSchema& schema);

// Applies an existing plan; encoding is identical to the fitting path.
Dataset apply_preprocess(const RawTable& table, const DatasetSchema& schema,
                         const PreprocessPlan& plan);

std::string serialize_plan(const PreprocessPlan& plan);
PreprocessPlan deserialize_plan(const std::string& text);

}  // namespace fairmask
