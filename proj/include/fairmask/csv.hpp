#pragma once

#include <string>
#include <vector>

#include "fairmask/dataset.hpp"

namespace fairmask {

/// Parsed CSV contents aligned to a schema: cells stay textual until
/// preprocessing, but numeric columns are validated on load.
struct RawTable {
    std::vector<std::string> header;                 // schema column order
    std::vector<std::vector<std::string>> rows;      // aligned to header
    std::vector<std::size_t> source_row_numbers;     // 1-based line numbers
    std::size_t dropped_missing = 0;                 // rows dropped for missing cells

    std::size_t column_index(const std::string& name) const;
};

// Reads a comma-separated file with a header row. The header must contain
// every schema column (order-independent; extra columns are ignored). Rows
// missing a value in any used column are dropped and counted. Double-quoted
// cells with embedded commas and doubled quotes are handled.
RawTable load_csv(const std::string& path, const DatasetSchema& schema);
RawTable parse_csv(const std::string& text, const DatasetSchema& schema);

std::string csv_escape(const std::string& cell);

}  // namespace fairmask
