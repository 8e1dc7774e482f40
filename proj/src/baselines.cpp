#include "fairmask/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fairmask {

ScoreModel unconstrained(const Dataset& train, ModelFamily family, const TrainConfig& cfg,
                         const MlpArchitecture& arch) {
    ScoreModel m = train_family(train, family, cfg, arch);
    m.tau = 0.0;
    return m;
}

ScoreModel omit_sensitive(const Dataset& train, ModelFamily family, const TrainConfig& cfg,
                          const MlpArchitecture& arch) {
    if (train.sensitive_index_set.size() >= train.n_cols)
        throw std::invalid_argument("omit_sensitive: no non-sensitive columns left");
    std::vector<std::size_t> drop = train.sensitive_index_set;
    const Dataset reduced = train.drop_columns(drop);
    ScoreModel m = train_family(reduced, family, cfg, arch);

    // re-embed to full width with zero weight on the dropped columns
    std::vector<bool> is_sensitive(train.n_cols, false);
    for (std::size_t c : drop) is_sensitive[c] = true;
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < train.n_cols; ++c)
        if (!is_sensitive[c]) kept.push_back(c);

    if (m.is_linear_family()) {
        auto& p = std::get<LinearParams>(m.params);
        std::vector<double> full(train.n_cols, 0.0);
        for (std::size_t j = 0; j < kept.size(); ++j) full[kept[j]] = p.weights[j];
        p.weights = std::move(full);
    } else {
        auto& p = std::get<MlpParams>(m.params);
        const std::size_t out = p.widths[1];
        std::vector<double> full(train.n_cols * out, 0.0);
        for (std::size_t o = 0; o < out; ++o)
            for (std::size_t j = 0; j < kept.size(); ++j)
                full[o * train.n_cols + kept[j]] = p.layer_weights[0][o * kept.size() + j];
        p.layer_weights[0] = std::move(full);
        p.widths[0] = train.n_cols;
    }
    return m;
}

ScoreModel majority(const Dataset& train) {
    if (train.n_rows == 0) throw std::invalid_argument("majority: empty training set");
    const auto positives =
        static_cast<std::size_t>(std::count(train.labels.begin(), train.labels.end(), 1));
    ScoreModel m;
    m.family = ModelFamily::constant;
    m.params = ConstantParams{2 * positives > train.n_rows ? 1.0 : 0.0};
    return m;
}

namespace {

struct FlipPlan {
    std::size_t promotions = 0;
    std::size_t demotions = 0;
    double gap = 0.0;
};

// Ranked row indices eligible for each flip direction. When the protected
// rate trails, promotions target protected negatives (best-ranked first)
// and demotions target unprotected positives (worst-ranked first); when it
// leads, the roles swap.
struct FlipCandidates {
    std::vector<std::size_t> promote;  // negatives to relabel 1, in flip order
    std::vector<std::size_t> demote;   // positives to relabel 0, in flip order
    bool protected_trails = true;
};

}  // namespace

MassageResult massage(const Dataset& train, const TrainConfig& ranker_cfg, ModelFamily family,
                      const TrainConfig& cfg, const MlpArchitecture& arch) {
    if (train.sensitive_index_set.size() != 1)
        throw std::invalid_argument(
            "massage: requires exactly one sensitive column (got " +
            std::to_string(train.sensitive_index_set.size()) + ")");
    const auto flags = train.protected_flags();
    const auto n_p = static_cast<double>(std::count(flags.begin(), flags.end(), 1));
    const auto n_u = static_cast<double>(flags.size()) - n_p;
    if (n_p == 0 || n_u == 0)
        throw std::invalid_argument("massage: both sensitive groups must be present");

    double pos_p = 0, pos_u = 0;
    for (std::size_t r = 0; r < train.n_rows; ++r)
        (flags[r] ? pos_p : pos_u) += train.labels[r];

    const ScoreModel ranker = train_logistic(train, ranker_cfg);
    std::vector<double> rank_score(train.n_rows);
    for (std::size_t r = 0; r < train.n_rows; ++r) rank_score[r] = ranker.score(train.row(r));

    FlipCandidates cand;
    cand.protected_trails = pos_p / n_p < pos_u / n_u;
    auto collect = [&](int flag, int label, bool descending) {
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < train.n_rows; ++r)
            if (flags[r] == flag && train.labels[r] == label) rows.push_back(r);
        std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
            if (rank_score[a] != rank_score[b])
                return descending ? rank_score[a] > rank_score[b]
                                  : rank_score[a] < rank_score[b];
            return a < b;
        });
        return rows;
    };
    if (cand.protected_trails) {
        cand.promote = collect(1, 0, true);   // highest-ranked protected negatives first
        cand.demote = collect(0, 1, false);   // lowest-ranked unprotected positives first
    } else {
        cand.promote = collect(0, 0, true);   // highest-ranked unprotected negatives first
        cand.demote = collect(1, 1, false);   // lowest-ranked protected positives first
    }

    // Exhaustive scan over per-side flip counts. Order of preference: the
    // smallest achievable rate gap, then the fewest total flips, then the
    // most balanced split, then flips on the over-admitted side.
    auto gap_after = [&](std::size_t a, std::size_t b) {
        double pp = pos_p, pu = pos_u;
        if (cand.protected_trails) {
            pp += static_cast<double>(a);
            pu -= static_cast<double>(b);
        } else {
            pu += static_cast<double>(a);
            pp -= static_cast<double>(b);
        }
        return std::abs(pp / n_p - pu / n_u);
    };
    FlipPlan best{0, 0, gap_after(0, 0)};
    for (std::size_t a = 0; a <= cand.promote.size(); ++a) {
        for (std::size_t b = 0; b <= cand.demote.size(); ++b) {
            const FlipPlan plan{a, b, gap_after(a, b)};
            const auto total = [](const FlipPlan& p) { return p.promotions + p.demotions; };
            const auto imbalance = [](const FlipPlan& p) {
                return p.promotions > p.demotions ? p.promotions - p.demotions
                                                  : p.demotions - p.promotions;
            };
            bool better = false;
            if (plan.gap < best.gap) better = true;
            else if (plan.gap == best.gap && total(plan) < total(best)) better = true;
            else if (plan.gap == best.gap && total(plan) == total(best) &&
                     imbalance(plan) < imbalance(best))
                better = true;
            else if (plan.gap == best.gap && total(plan) == total(best) &&
                     imbalance(plan) == imbalance(best) && plan.demotions > best.demotions)
                better = true;
            if (better) best = plan;
        }
    }

    MassageResult result;
    result.relabeled_train = train;  // deep copy; the input stays untouched
    for (std::size_t i = 0; i < best.promotions; ++i)
        result.relabeled_train.labels[cand.promote[i]] = 1;
    for (std::size_t i = 0; i < best.demotions; ++i)
        result.relabeled_train.labels[cand.demote[i]] = 0;
    result.promotions = best.promotions;
    result.demotions = best.demotions;
    result.post_gap = best.gap;
    result.model = train_family(result.relabeled_train, family, cfg, arch);
    result.model.tau = 0.0;
    return result;
}

}  // namespace fairmask
