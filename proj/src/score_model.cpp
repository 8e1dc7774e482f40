#include "fairmask/score_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairmask {

std::string family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::logistic: return "logistic";
        case ModelFamily::linear_svm: return "linear_svm";
        case ModelFamily::mlp: return "mlp";
        case ModelFamily::constant: return "constant";
    }
    throw std::logic_error("unknown family");
}

ModelFamily family_from_name(const std::string& name) {
    if (name == "logistic") return ModelFamily::logistic;
    if (name == "linear_svm" || name == "svm") return ModelFamily::linear_svm;
    if (name == "mlp") return ModelFamily::mlp;
    if (name == "constant") return ModelFamily::constant;
    throw std::invalid_argument("unknown model family '" + name + "'");
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void MaskSpec::validate_for(const Dataset& d) const {
    if (sensitive_index_set.size() != reference_values.size())
        throw std::invalid_argument("mask: index set and reference values differ in length");
    if (sensitive_index_set != d.sensitive_index_set)
        throw std::invalid_argument("mask: sensitive index set does not match the dataset's");
    for (double v : reference_values)
        if (!std::isfinite(v)) throw std::invalid_argument("mask: non-finite reference value");
}

MaskSpec MaskSpec::zeros(const Dataset& d) {
    MaskSpec spec;
    spec.sensitive_index_set = d.sensitive_index_set;
    spec.reference_values.assign(d.sensitive_index_set.size(), 0.0);
    return spec;
}

std::size_t ScoreModel::input_width() const {
    if (std::holds_alternative<LinearParams>(params))
        return std::get<LinearParams>(params).weights.size();
    if (std::holds_alternative<MlpParams>(params))
        return std::get<MlpParams>(params).widths.front();
    return 0;  // constant models accept any width
}

namespace {

double linear_value(const LinearParams& p, std::span<const double> x) {
    double z = p.intercept;
    for (std::size_t j = 0; j < p.weights.size(); ++j) z += p.weights[j] * x[j];
    return z;
}

double mlp_forward(const MlpParams& p, std::span<const double> x) {
    std::vector<double> act(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
        const std::size_t in = p.widths[l], out = p.widths[l + 1];
        next.assign(out, 0.0);
        const auto& w = p.layer_weights[l];
        const auto& b = p.layer_biases[l];
        for (std::size_t o = 0; o < out; ++o) {
            double z = b[o];
            for (std::size_t i = 0; i < in; ++i) z += w[o * in + i] * act[i];
            const bool last = (l + 2 == p.widths.size());
            if (last) {
                next[o] = sigmoid(z);
            } else if (p.activation == Activation::relu) {
                next[o] = z > 0.0 ? z : 0.0;
            } else {
                next[o] = sigmoid(z);
            }
        }
        act.swap(next);
    }
    return act[0];
}

}  // namespace

double ScoreModel::score(std::span<const double> x) const {
    const std::size_t want = input_width();
    if (family != ModelFamily::constant && x.size() != want)
        throw std::invalid_argument("score: expected feature width " + std::to_string(want) +
                                    ", got " + std::to_string(x.size()));
    std::vector<double> masked;
    if (mask) {
        masked.assign(x.begin(), x.end());
        for (std::size_t k = 0; k < mask->sensitive_index_set.size(); ++k) {
            const std::size_t c = mask->sensitive_index_set[k];
            if (c >= masked.size())
                throw std::invalid_argument("score: mask index " + std::to_string(c) +
                                            " out of range for width " +
                                            std::to_string(masked.size()));
            masked[c] = mask->reference_values[k];
        }
        x = masked;
    }
    double s;
    switch (family) {
        case ModelFamily::logistic:
        case ModelFamily::linear_svm:
            s = sigmoid(linear_value(std::get<LinearParams>(params), x));
            break;
        case ModelFamily::mlp:
            s = mlp_forward(std::get<MlpParams>(params), x);
            break;
        case ModelFamily::constant:
            s = std::get<ConstantParams>(params).value;
            break;
        default:
            throw std::logic_error("unknown family");
    }
    return std::clamp(s, 0.0, 1.0);
}

std::vector<double> predict_scores(const ScoreModel& model, const Dataset& d) {
    std::vector<double> out(d.n_rows);
    for (std::size_t r = 0; r < d.n_rows; ++r) out[r] = model.score(d.row(r)) + model.tau;
    return out;
}

std::vector<int> predict_decisions(const ScoreModel& model, const Dataset& d) {
    std::vector<int> out(d.n_rows);
    for (std::size_t r = 0; r < d.n_rows; ++r) out[r] = model.decide(d.row(r));
    return out;
}

std::string serialize_model(const ScoreModel& model) {
    std::ostringstream out;
    out << "fairmask-model v1\n";
    out << "family " << family_name(model.family) << '\n';
    out << "tau " << format_double(model.tau) << '\n';
    if (std::holds_alternative<LinearParams>(model.params)) {
        const auto& p = std::get<LinearParams>(model.params);
        out << "width " << p.weights.size() << '\n';
        out << "weights";
        for (double w : p.weights) out << ' ' << format_double(w);
        out << '\n';
        out << "intercept " << format_double(p.intercept) << '\n';
    } else if (std::holds_alternative<MlpParams>(model.params)) {
        const auto& p = std::get<MlpParams>(model.params);
        out << "activation " << (p.activation == Activation::relu ? "relu" : "sigmoid") << '\n';
        out << "widths";
        for (std::size_t w : p.widths) out << ' ' << w;
        out << '\n';
        for (std::size_t l = 0; l + 1 < p.widths.size(); ++l) {
            out << "layer_weights " << l;
            for (double w : p.layer_weights[l]) out << ' ' << format_double(w);
            out << '\n';
            out << "layer_biases " << l;
            for (double b : p.layer_biases[l]) out << ' ' << format_double(b);
            out << '\n';
        }
    } else {
        out << "constant " << format_double(std::get<ConstantParams>(model.params).value) << '\n';
    }
    if (model.mask) {
        out << "mask_indices";
        for (std::size_t c : model.mask->sensitive_index_set) out << ' ' << c;
        out << '\n';
        out << "mask_values";
        for (double v : model.mask->reference_values) out << ' ' << format_double(v);
        out << '\n';
    }
    return out.str();
}

ScoreModel deserialize_model(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "fairmask-model v1")
        throw std::invalid_argument("model: bad or missing header");
    ScoreModel m;
    LinearParams lin;
    MlpParams mlp;
    ConstantParams cst;
    bool has_lin = false, has_mlp = false, has_cst = false;
    MaskSpec mask;
    bool has_mask = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "family") {
            std::string v;
            ls >> v;
            m.family = family_from_name(v);
        } else if (key == "tau") {
            ls >> m.tau;
        } else if (key == "width") {
            std::size_t w;
            ls >> w;
            lin.weights.resize(w);
            has_lin = true;
        } else if (key == "weights") {
            for (auto& w : lin.weights) ls >> w;
        } else if (key == "intercept") {
            ls >> lin.intercept;
        } else if (key == "activation") {
            std::string v;
            ls >> v;
            mlp.activation = v == "relu" ? Activation::relu : Activation::sigmoid;
            has_mlp = true;
        } else if (key == "widths") {
            std::size_t w;
            while (ls >> w) mlp.widths.push_back(w);
            mlp.layer_weights.resize(mlp.widths.size() - 1);
            mlp.layer_biases.resize(mlp.widths.size() - 1);
            for (std::size_t l = 0; l + 1 < mlp.widths.size(); ++l) {
                mlp.layer_weights[l].resize(mlp.widths[l] * mlp.widths[l + 1]);
                mlp.layer_biases[l].resize(mlp.widths[l + 1]);
            }
        } else if (key == "layer_weights") {
            std::size_t l;
            ls >> l;
            for (auto& w : mlp.layer_weights.at(l)) ls >> w;
        } else if (key == "layer_biases") {
            std::size_t l;
            ls >> l;
            for (auto& b : mlp.layer_biases.at(l)) ls >> b;
        } else if (key == "constant") {
            ls >> cst.value;
            has_cst = true;
        } else if (key == "mask_indices") {
            std::size_t c;
            while (ls >> c) mask.sensitive_index_set.push_back(c);
            has_mask = true;
        } else if (key == "mask_values") {
            double v;
            while (ls >> v) mask.reference_values.push_back(v);
            has_mask = true;
        } else {
            throw std::invalid_argument("model: unknown key '" + key + "'");
        }
        // variable-length lines read until the stream runs out; fixed-count
        // lines must parse completely
        if (ls.fail() && key != "widths" && key != "mask_indices" && key != "mask_values")
            throw std::invalid_argument("model: malformed line '" + line + "'");
    }
    if (has_mlp) m.params = std::move(mlp);
    else if (has_cst) m.params = cst;
    else if (has_lin) m.params = std::move(lin);
    else throw std::invalid_argument("model: no parameters found");
    if (has_mask) {
        if (mask.sensitive_index_set.size() != mask.reference_values.size())
            throw std::invalid_argument("model: mask indices/values length mismatch");
        m.mask = std::move(mask);
    }
    return m;
}

void save_model(const ScoreModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("model: cannot write '" + path + "'");
    out << serialize_model(model);
}

ScoreModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("model: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_model(buf.str());
}

}  // namespace fairmask
