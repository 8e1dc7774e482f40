#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairmask/dataset.hpp"

namespace fairmask {

enum class ModelFamily { logistic, linear_svm, mlp, constant };

std::string family_name(ModelFamily f);
ModelFamily family_from_name(const std::string& name);

enum class Activation { relu, sigmoid };

struct LinearParams {
    std::vector<double> weights;
    double intercept = 0.0;
};

struct MlpParams {
    // layer l maps widths[l] -> widths[l+1]; weights are row-major
    // (out x in), the last layer is a single logistic output unit.
    std::vector<std::size_t> widths;
    std::vector<std::vector<double>> layer_weights;
    std::vector<std::vector<double>> layer_biases;
    Activation activation = Activation::relu;
};

struct ConstantParams {
    double value = 0.0;
};

/// Sensitive columns and the values they are overwritten with at
/// prediction time.
struct MaskSpec {
    std::vector<std::size_t> sensitive_index_set;
    std::vector<double> reference_values;

    void validate_for(const Dataset& d) const;
    static MaskSpec zeros(const Dataset& d);
};

/// A trained scoring function h: R^(l+1) -> [0,1].
///
/// score(x) is clamped to [0,1]; the offset tau is added outside the clamp,
/// so score_plus_tau may leave [0,1]. A row is classified positive iff
/// score(x) + tau > 1/2 (ties classify to 0). When mask is set, inputs pass
/// through it before scoring, which makes decisions constant in the
/// sensitive columns.
struct ScoreModel {
    ModelFamily family = ModelFamily::logistic;
    std::variant<LinearParams, MlpParams, ConstantParams> params = LinearParams{};
    double tau = 0.0;
    std::optional<MaskSpec> mask;
    std::vector<std::string> warnings;  // training diagnostics, not serialized

    std::size_t input_width() const;

    double score(std::span<const double> x) const;
    double score_plus_tau(std::span<const double> x) const { return score(x) + tau; }
    int decide(std::span<const double> x) const { return score(x) + tau > 0.5 ? 1 : 0; }

    const LinearParams& linear() const { return std::get<LinearParams>(params); }
    const MlpParams& mlp() const { return std::get<MlpParams>(params); }

    bool is_linear_family() const {
        return family == ModelFamily::logistic || family == ModelFamily::linear_svm;
    }
};

// element i = score(x_i) + tau
std::vector<double> predict_scores(const ScoreModel& model, const Dataset& d);
std::vector<int> predict_decisions(const ScoreModel& model, const Dataset& d);

// Versioned plain-text serialization; doubles are written with enough
// digits to round-trip bit-exactly.
std::string serialize_model(const ScoreModel& model);
ScoreModel deserialize_model(const std::string& text);
void save_model(const ScoreModel& model, const std::string& path);
ScoreModel load_model(const std::string& path);

double sigmoid(double z);

// full round-trip decimal formatting for doubles
std::string format_double(double v);

}  // namespace fairmask
