#pragma once

#include "fairmask/dataset.hpp"
#include "fairmask/score_model.hpp"
#include "fairmask/train.hpp"

namespace fairmask {

// The accuracy-maximizing model over all features, tau = 0. This is the
// reference h* for every latent-discrimination measure.
ScoreModel unconstrained(const Dataset& train, ModelFamily family, const TrainConfig& cfg,
                         const MlpArchitecture& arch = {});

// Same family trained with the sensitive columns dropped. The returned
// model still accepts full-width rows: the dropped inputs carry zero
// weight, so decisions are invariant to them.
ScoreModel omit_sensitive(const Dataset& train, ModelFamily family, const TrainConfig& cfg,
                          const MlpArchitecture& arch = {});

// Constant predictor for the most frequent label; ties go to 0.
ScoreModel majority(const Dataset& train);

/// Relabeling preprocessor: a logistic ranker orders the candidates, the
/// borderline rows are flipped until the group positive rates are as close
/// as the data allows, and the final model is retrained on the relabeled
/// copy. Single sensitive column only.
struct MassageResult {
    ScoreModel model;
    std::size_t promotions = 0;  // negatives relabeled positive
    std::size_t demotions = 0;   // positives relabeled negative
    double post_gap = 0.0;       // |protected rate - unprotected rate| after relabeling
    Dataset relabeled_train;     // the massaged copy (input left untouched)
};

MassageResult massage(const Dataset& train, const TrainConfig& ranker_cfg, ModelFamily family,
                      const TrainConfig& cfg, const MlpArchitecture& arch = {});

}  // namespace fairmask
