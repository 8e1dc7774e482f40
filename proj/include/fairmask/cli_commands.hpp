#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairmask/report.hpp"

namespace fairmask::cli {

struct CommonOptions {
    std::string data_path;
    std::string schema_path;
    std::string family = "logistic";
    std::uint64_t seed = 0;
    std::size_t repeats = 1;
    SplitFractions fractions;
    std::optional<std::string> tau_grid;  // "lo:hi:count"
    std::optional<std::size_t> k;
    std::string out_dir = ".";
};

struct SynthOptions {
    bool toy = false;
    SyntheticSpec spec;
    std::string out_dir = ".";
};

// Each command returns the files it wrote. On error the partially written
// outputs are removed before the exception propagates.
std::vector<std::string> cmd_compare(const CommonOptions& opt);
std::vector<std::string> cmd_sweep(const CommonOptions& opt);
std::vector<std::string> cmd_consistency(const CommonOptions& opt);
std::vector<std::string> cmd_synth(const SynthOptions& opt);

TauGrid parse_tau_grid(const std::string& text);

}  // namespace fairmask::cli
