#pragma once

#include <cstdint>
#include <string>

#include "fairmask/dataset.hpp"

namespace fairmask {

// The bundled 8-row admissions example: columns (sensitive, sat,
// extracurricular), binary admission labels, 4 rows per group. Raw feature
// values are preserved; standardize before training.
Dataset toy_table2();

// CSV text of the same fixture (admission,sensitive,sat,extracurricular).
std::string toy_table2_csv();

// Matching schema for the CSV form.
DatasetSchema toy_table2_schema();

/// Controls for the synthetic generator. The proxy feature's sample
/// correlation with the sensitive bit lands within 0.05 of rho for
/// n >= 2000. Base rates steer each group's positive frequency.
struct SyntheticSpec {
    std::size_t n = 2000;
    double rho = 0.0;  // in [-1, 1]
    double base_rate_protected = 0.3;
    double base_rate_unprotected = 0.5;
    double noise = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

// Labeled dataset with columns (sensitive, proxy, skill, extra), where
// proxy correlates with the sensitive bit and the latent outcome depends
// on skill, proxy and group membership. Deterministic per seed.
Dataset synthesize(const SyntheticSpec& spec);

std::string dataset_to_csv(const Dataset& d, const std::string& label_name = "label");
DatasetSchema synthetic_schema();

}  // namespace fairmask
