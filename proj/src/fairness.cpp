#include "fairmask/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fairmask/metrics.hpp"

namespace fairmask {

void TauGrid::validate() const {
    if (count == 0) throw std::invalid_argument("tau grid: count must be >= 1");
    if (!(lo <= hi)) throw std::invalid_argument("tau grid: lo must be <= hi");
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("tau grid: bounds must be finite");
}

std::vector<double> TauGrid::values() const {
    validate();
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
        v.push_back(lo);
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v.push_back(lo + step * static_cast<double>(i));
    return v;
}

TauGrid TauGrid::covering(const ScoreModel& model, const Dataset& d, const MaskSpec& spec,
                          std::size_t count) {
    const Dataset masked = mask(d, spec);
    double lo_score = std::numeric_limits<double>::infinity();
    double hi_score = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < masked.n_rows; ++r) {
        const double s = model.score(masked.row(r));
        lo_score = std::min(lo_score, s);
        hi_score = std::max(hi_score, s);
    }
    return TauGrid{0.5 - hi_score, 0.5 - lo_score, count};
}

Dataset mask(const Dataset& d, const MaskSpec& spec) {
    spec.validate_for(d);
    Dataset out = d;
    for (std::size_t k = 0; k < spec.sensitive_index_set.size(); ++k) {
        const std::size_t c = spec.sensitive_index_set[k];
        if (c >= d.n_cols)
            throw std::out_of_range("mask: column index " + std::to_string(c) +
                                    " out of range for width " + std::to_string(d.n_cols));
        for (std::size_t r = 0; r < out.n_rows; ++r) out.at(r, c) = spec.reference_values[k];
    }
    out.assign_group_ids();
    return out;
}

namespace {

double accuracy_at_tau(const std::vector<double>& masked_scores, const std::vector<int>& labels,
                       double tau) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int yhat = masked_scores[i] + tau > 0.5 ? 1 : 0;
        correct += static_cast<std::size_t>(yhat == labels[i]);
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

// base scores (no tau) on the masked copy of d
std::vector<double> masked_base_scores(const ScoreModel& model, const Dataset& d,
                                       const MaskSpec& spec) {
    const Dataset masked = mask(d, spec);
    std::vector<double> s(masked.n_rows);
    for (std::size_t r = 0; r < masked.n_rows; ++r) s[r] = model.score(masked.row(r));
    return s;
}

}  // namespace

double select_tau(const ScoreModel& model, const Dataset& validation, const MaskSpec& spec,
                  const TauGrid& grid) {
    if (validation.n_rows == 0) throw std::invalid_argument("select_tau: empty validation set");
    const auto scores = masked_base_scores(model, validation, spec);
    double best_tau = 0.0;
    double best_acc = -1.0;
    for (double tau : grid.values()) {
        const double acc = accuracy_at_tau(scores, validation.labels, tau);
        const bool better =
            acc > best_acc ||
            (acc == best_acc && (std::abs(tau) < std::abs(best_tau) ||
                                 (std::abs(tau) == std::abs(best_tau) && tau < best_tau)));
        if (better) {
            best_acc = acc;
            best_tau = tau;
        }
    }
    return best_tau;
}

ScoreModel train_then_mask(const Dataset& train, const Dataset& validation, const MaskSpec& spec,
                           ModelFamily family, const TrainConfig& cfg, const TauGrid& grid,
                           const MlpArchitecture& arch) {
    if (train.n_cols != validation.n_cols)
        throw std::invalid_argument("train_then_mask: train/validation width mismatch");
    ScoreModel model = train_family(train, family, cfg, arch);
    model.tau = select_tau(model, validation, spec, grid);
    model.mask = spec;
    return model;
}

void flag_pareto_frontier(std::vector<TauSweepPoint>& points) {
    // sort indices by accuracy desc, gap asc; a point is dominated iff a
    // strictly-better-accuracy point has gap <= its own, or an equal-accuracy
    // point has strictly smaller gap
    const std::size_t k = points.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a].accuracy != points[b].accuracy)
            return points[a].accuracy > points[b].accuracy;
        return points[a].group_discr < points[b].group_discr;
    });
    double best_gap_above = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j < k && points[order[j]].accuracy == points[order[i]].accuracy) ++j;
        double min_gap_here = std::numeric_limits<double>::infinity();
        for (std::size_t t = i; t < j; ++t)
            min_gap_here = std::min(min_gap_here, points[order[t]].group_discr);
        for (std::size_t t = i; t < j; ++t) {
            auto& pt = points[order[t]];
            pt.on_frontier = pt.group_discr < best_gap_above && pt.group_discr <= min_gap_here;
        }
        best_gap_above = std::min(best_gap_above, min_gap_here);
        i = j;
    }
}

TauSweepResult tau_sweep(const ScoreModel& model, const Dataset& eval_data, const MaskSpec& spec,
                         const TauGrid& grid) {
    if (grid.count < 2) throw std::invalid_argument("tau_sweep: grid count must be >= 2");
    const auto scores = masked_base_scores(model, eval_data, spec);

    // original (unmasked) group membership per sensitive column
    std::vector<std::vector<int>> column_flags;
    for (std::size_t c : eval_data.sensitive_index_set) {
        std::vector<int> flags(eval_data.n_rows);
        bool saw0 = false, saw1 = false;
        for (std::size_t r = 0; r < eval_data.n_rows; ++r) {
            flags[r] = eval_data.at(r, c) != 0.0 ? 1 : 0;
            (flags[r] ? saw1 : saw0) = true;
        }
        if (!saw0 || !saw1)
            throw std::invalid_argument("tau_sweep: group discrimination undefined, column " +
                                        std::to_string(c) + " has a single group");
        column_flags.push_back(std::move(flags));
    }

    TauSweepResult result;
    result.grid_spec = grid;
    for (double tau : grid.values()) {
        TauSweepPoint pt;
        pt.tau = tau;
        std::vector<int> yhat(eval_data.n_rows);
        for (std::size_t r = 0; r < eval_data.n_rows; ++r)
            yhat[r] = scores[r] + tau > 0.5 ? 1 : 0;
        pt.accuracy = accuracy_at_tau(scores, eval_data.labels, tau);
        for (const auto& flags : column_flags) {
            EvalFrame f;
            f.labels = eval_data.labels;
            f.predictions = yhat;
            f.protected_flag = flags;
            pt.column_gaps.push_back(group_discrimination(f));
        }
        pt.group_discr = pt.column_gaps.front();
        result.points.push_back(std::move(pt));
    }
    flag_pareto_frontier(result.points);

    double best_acc = -1.0;
    double best_tau = 0.0;
    for (const auto& pt : result.points) {
        const bool better =
            pt.accuracy > best_acc ||
            (pt.accuracy == best_acc && (std::abs(pt.tau) < std::abs(best_tau) ||
                                         (std::abs(pt.tau) == std::abs(best_tau) &&
                                          pt.tau < best_tau)));
        if (better) {
            best_acc = pt.accuracy;
            best_tau = pt.tau;
        }
    }
    result.tau_star = best_tau;
    return result;
}

std::string export_sweep_table(const TauSweepResult& result, bool marker_row) {
    // fixed leading columns; with several sensitive columns the marginal
    // gaps of the remaining ones are appended after on_frontier
    std::size_t extra = 0;
    for (const auto& pt : result.points)
        extra = std::max(extra, pt.column_gaps.size() > 1 ? pt.column_gaps.size() - 1 : 0);

    std::ostringstream out;
    out << "tau,accuracy,group_discr,on_frontier";
    for (std::size_t k = 0; k < extra; ++k) out << ",group_discr_" << k + 2;
    out << '\n';
    auto emit = [&](const TauSweepPoint& pt, const char* frontier_cell) {
        out << format_double(pt.tau) << ',' << format_double(pt.accuracy) << ','
            << format_double(pt.group_discr) << ',' << frontier_cell;
        for (std::size_t k = 0; k < extra; ++k)
            out << ',' << (k + 1 < pt.column_gaps.size() ? format_double(pt.column_gaps[k + 1])
                                                         : std::string());
        out << '\n';
    };
    for (const auto& pt : result.points) emit(pt, pt.on_frontier ? "1" : "0");
    if (marker_row) {
        for (const auto& pt : result.points) {
            if (pt.tau == result.tau_star) {
                emit(pt, "tau_star");
                break;
            }
        }
    }
    return out.str();
}

}  // namespace fairmask
