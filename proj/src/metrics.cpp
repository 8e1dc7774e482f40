#include "fairmask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "fairmask/rng.hpp"

namespace fairmask {

void EvalFrame::validate() const {
    const std::size_t n = labels.size();
    if (n == 0) throw std::invalid_argument("metrics: empty evaluation frame");
    auto check = [&](std::size_t got, const char* what) {
        if (got != n)
            throw std::invalid_argument(std::string("metrics: ") + what + " length " +
                                        std::to_string(got) + " != n " + std::to_string(n));
    };
    if (!predictions.empty()) check(predictions.size(), "predictions");
    if (!reference_scores.empty()) check(reference_scores.size(), "reference_scores");
    if (!candidate_scores.empty()) check(candidate_scores.size(), "candidate_scores");
    if (!group.empty()) check(group.size(), "group");
    if (!protected_flag.empty()) check(protected_flag.size(), "protected_flag");
}

double accuracy(const EvalFrame& f) {
    f.validate();
    if (f.predictions.size() != f.labels.size())
        throw std::invalid_argument("accuracy: predictions required");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < f.labels.size(); ++i)
        wrong += static_cast<std::size_t>(std::abs(f.labels[i] - f.predictions[i]));
    return 1.0 - static_cast<double>(wrong) / static_cast<double>(f.labels.size());
}

Admittance admittance(const EvalFrame& f) {
    f.validate();
    if (f.predictions.size() != f.labels.size() || f.protected_flag.size() != f.labels.size())
        throw std::invalid_argument("admittance: predictions and protected_flag required");
    std::size_t n1 = 0, n0 = 0, pos1 = 0, pos0 = 0;
    for (std::size_t i = 0; i < f.labels.size(); ++i) {
        if (f.protected_flag[i]) {
            ++n1;
            pos1 += static_cast<std::size_t>(f.predictions[i]);
        } else {
            ++n0;
            pos0 += static_cast<std::size_t>(f.predictions[i]);
        }
    }
    if (n1 == 0 || n0 == 0)
        throw std::invalid_argument("admittance: a group is empty, rate undefined");
    return {static_cast<double>(pos1) / static_cast<double>(n1),
            static_cast<double>(pos0) / static_cast<double>(n0)};
}

double group_discrimination(const EvalFrame& f) {
    const auto a = admittance(f);
    return std::abs(a.admit_protected - a.admit_unprotected);
}

namespace {

// member row indices per group id
std::map<int, std::vector<std::size_t>> group_members(const EvalFrame& f) {
    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < f.group.size(); ++i) members[f.group[i]].push_back(i);
    return members;
}

// strict=false counts h*(i) > h*(j) && h(i) < h(j);
// strict=true  counts h*(i) > h*(j) && h(i) <= h(j).
double pairwise_violation_ratio(const EvalFrame& f, bool strict) {
    f.validate();
    if (f.reference_scores.size() != f.labels.size() ||
        f.candidate_scores.size() != f.labels.size() || f.group.size() != f.labels.size())
        throw std::invalid_argument("latent discrimination: scores and groups required");

    const auto members = group_members(f);
    double total_pairs = 0.0;
    double violations = 0.0;
    for (const auto& [gid, rows] : members) {
        const std::size_t m = rows.size();
        total_pairs += 0.5 * static_cast<double>(m) * static_cast<double>(m - 1);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a + 1; b < m; ++b) {
                const std::size_t i = rows[a], j = rows[b];
                const double ri = f.reference_scores[i], rj = f.reference_scores[j];
                const double ci = f.candidate_scores[i], cj = f.candidate_scores[j];
                bool bad;
                if (strict)
                    bad = (ri > rj && ci <= cj) || (rj > ri && cj <= ci);
                else
                    bad = (ri > rj && ci < cj) || (rj > ri && cj < ci);
                if (bad) violations += 1.0;
            }
        }
    }
    if (total_pairs == 0.0)
        throw std::invalid_argument("latent discrimination: no within-group pairs");
    return violations / total_pairs;
}

}  // namespace

double latent_discrimination(const EvalFrame& f) { return pairwise_violation_ratio(f, false); }

double strict_latent_discrimination(const EvalFrame& f) {
    return pairwise_violation_ratio(f, true);
}

SubsampleEstimate pair_subsample_ld(const EvalFrame& f, std::size_t pairs, std::uint64_t seed) {
    f.validate();
    if (pairs == 0) throw std::invalid_argument("pair_subsample_ld: pairs must be >= 1");
    if (f.reference_scores.size() != f.labels.size() ||
        f.candidate_scores.size() != f.labels.size() || f.group.size() != f.labels.size())
        throw std::invalid_argument("pair_subsample_ld: scores and groups required");

    const auto members = group_members(f);
    // cumulative pair counts so groups are drawn proportionally to C(m,2)
    std::vector<const std::vector<std::size_t>*> groups;
    std::vector<std::uint64_t> cum;
    std::uint64_t total = 0;
    for (const auto& [gid, rows] : members) {
        const std::uint64_t m = rows.size();
        const std::uint64_t npairs = m * (m - 1) / 2;
        if (npairs == 0) continue;
        total += npairs;
        groups.push_back(&rows);
        cum.push_back(total);
    }
    if (total == 0) throw std::invalid_argument("pair_subsample_ld: no within-group pairs");

    Rng rng(seed);
    std::size_t violations = 0;
    for (std::size_t s = 0; s < pairs; ++s) {
        const std::uint64_t t = rng.next_below(total);
        const std::size_t g =
            static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), t) - cum.begin());
        const auto& rows = *groups[g];
        const std::size_t m = rows.size();
        std::size_t a = static_cast<std::size_t>(rng.next_below(m));
        std::size_t b = static_cast<std::size_t>(rng.next_below(m - 1));
        if (b >= a) ++b;
        const std::size_t i = rows[a], j = rows[b];
        const double ri = f.reference_scores[i], rj = f.reference_scores[j];
        const double ci = f.candidate_scores[i], cj = f.candidate_scores[j];
        if ((ri > rj && ci < cj) || (rj > ri && cj < ci)) ++violations;
    }
    SubsampleEstimate est;
    est.pairs = pairs;
    est.value = static_cast<double>(violations) / static_cast<double>(pairs);
    est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(pairs));
    return est;
}

std::vector<std::pair<double, double>> knn_consistency(const std::vector<double>& values,
                                                       double offset, const Dataset& d,
                                                       std::size_t k) {
    if (values.size() != d.n_rows)
        throw std::invalid_argument("knn_consistency: values length != rows");
    if (k == 0 || k >= d.n_rows)
        throw std::invalid_argument("knn_consistency: k must satisfy 1 <= k < n (k=" +
                                    std::to_string(k) + ", n=" + std::to_string(d.n_rows) + ")");

    std::vector<bool> is_sensitive(d.n_cols, false);
    for (std::size_t c : d.sensitive_index_set) is_sensitive[c] = true;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < d.n_cols; ++c)
        if (!is_sensitive[c]) cols.push_back(c);

    const std::size_t n = d.n_rows;
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c : cols) {
                const double delta = d.at(i, c) - d.at(j, c);
                s += delta * delta;
            }
            dist[j] = {s, j};
        }
        dist[i].first = std::numeric_limits<double>::infinity();  // exclude self
        // ties break toward the lower row index via the second component
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        double sum = 0.0;
        for (std::size_t t = 0; t < k; ++t) sum += values[dist[t].second];
        out.emplace_back(values[i] + offset, sum / static_cast<double>(k) + offset);
    }
    return out;
}

}  // namespace fairmask
