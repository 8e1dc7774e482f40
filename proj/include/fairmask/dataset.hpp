#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairmask {

enum class ColumnKind { numeric, categorical };

/// Declares one protected attribute and how it is handled.
///
/// mask_reference is the raw value every row is masked to at prediction time.
/// protected_level names the raw value encoded as 1 (the protected group);
/// when empty, the column must already be numeric 0/1 and is used as-is.
/// binarize_leq, when set on a numeric column, encodes value <= threshold
/// as 1 (protected) and everything else as 0.
struct SensitiveColumn {
    std::string name;
    std::string mask_reference;
    std::string protected_level;
    std::optional<double> binarize_leq;
};

/// Declarative description of a tabular dataset.
struct DatasetSchema {
    std::vector<std::pair<std::string, ColumnKind>> columns;  // includes the label column
    std::string label_column;
    std::string positive_label;
    std::vector<SensitiveColumn> sensitive_columns;

    // Throws std::invalid_argument on any structural violation:
    // label/sensitive names must appear exactly once in columns, and at
    // least one sensitive column must be declared.
    void validate() const;

    bool is_sensitive(const std::string& column_name) const;
};

// Schema config file (plain text, one declaration per line). See docs/README.
DatasetSchema load_schema(const std::string& path);
DatasetSchema parse_schema(const std::string& text);
std::string format_schema(const DatasetSchema& schema);

/// Numeric feature matrix with sensitive-column bookkeeping.
///
/// features is row-major, n_rows x n_cols. group_id identifies each row's
/// joint sensitive-value combination: two rows share an id iff their
/// sensitive columns are identical. row_ids carry provenance back to the
/// source table.
struct Dataset {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> features;
    std::vector<std::size_t> sensitive_index_set;
    std::vector<int> labels;
    std::vector<int> group_id;
    std::vector<std::size_t> row_ids;
    std::vector<std::string> column_names;

    std::span<const double> row(std::size_t r) const {
        return {features.data() + r * n_cols, n_cols};
    }
    double at(std::size_t r, std::size_t c) const { return features[r * n_cols + c]; }
    double& at(std::size_t r, std::size_t c) { return features[r * n_cols + c]; }

    // Recomputes group_id from the current sensitive column contents,
    // numbering groups by first appearance.
    void assign_group_ids();

    // 0/1 flag per row taken from the designated (first) sensitive column.
    std::vector<int> protected_flags() const;

    Dataset select_rows(const std::vector<std::size_t>& rows) const;

    // Copy with the given columns removed (labels and provenance kept).
    Dataset drop_columns(const std::vector<std::size_t>& cols) const;

    void validate() const;
};

struct SplitFractions {
    double train = 0.6;
    double validation = 0.2;
    double test = 0.2;
};

struct Split {
    Dataset train;
    Dataset validation;
    Dataset test;
    std::uint64_t seed = 0;
};

// Stratified per label class so each part's positive rate stays within
// 1/part_size of the source's. Deterministic per seed. Throws if any part
// would be empty or the fractions are invalid.
Split split_dataset(const Dataset& d, SplitFractions fractions, std::uint64_t seed);

// Row-index assignment behind split_dataset, reusable for raw tables.
// Returns {train, validation, test} index lists, each sorted ascending.
std::array<std::vector<std::size_t>, 3> split_indices(const std::vector<int>& labels,
                                                      SplitFractions fractions,
                                                      std::uint64_t seed);

}  // namespace fairmask
