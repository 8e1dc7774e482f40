#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fairmask/dataset.hpp"

namespace fairmask {

/// Everything the measures need about one evaluation run: true and
/// predicted labels, the reference model's scores, the candidate model's
/// scores, and each row's group membership.
struct EvalFrame {
    std::vector<int> labels;
    std::vector<int> predictions;
    std::vector<double> reference_scores;  // unmasked h* scores
    std::vector<double> candidate_scores;
    std::vector<int> group;           // joint sensitive-value group per row
    std::vector<int> protected_flag;  // designated sensitive column, 0/1

    std::size_t size() const { return labels.size(); }
    void validate() const;
};

// 1 - sum|y - yhat| / n
double accuracy(const EvalFrame& f);

// positive-prediction rate per group; throws if either group is empty
struct Admittance {
    double admit_protected = 0.0;
    double admit_unprotected = 0.0;
};
Admittance admittance(const EvalFrame& f);

// |admit_protected - admit_unprotected|
double group_discrimination(const EvalFrame& f);

// Fraction of within-group unordered pairs whose candidate-score order
// strictly flips the reference order: h*(i) > h*(j) and h(i) < h(j).
// Denominator sums C(size,2) over every group. Throws when no group has
// two rows.
double latent_discrimination(const EvalFrame& f);

// As above but ties also violate: h*(i) > h*(j) and h(i) <= h(j).
// Always >= latent_discrimination.
double strict_latent_discrimination(const EvalFrame& f);

// Seeded Monte-Carlo estimate of latent_discrimination by uniform sampling
// of within-group pairs; the result pairs the estimate with its standard
// error sqrt(p(1-p)/pairs).
struct SubsampleEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t pairs = 0;
};
SubsampleEstimate pair_subsample_ld(const EvalFrame& f, std::size_t pairs, std::uint64_t seed);

// Per row: (value_i + offset, mean of the k nearest neighbours' values +
// offset). Distance is Euclidean over the non-sensitive feature columns;
// a row is never its own neighbour; distance ties break toward the lower
// row index. values may be prediction scores or hard labels.
std::vector<std::pair<double, double>> knn_consistency(const std::vector<double>& values,
                                                       double offset, const Dataset& d,
                                                       std::size_t k);

}  // namespace fairmask
