#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fairmask/baselines.hpp"
#include "fairmask/cli_commands.hpp"
#include "fairmask/csv.hpp"
#include "fairmask/fairness.hpp"
#include "fairmask/fixtures.hpp"
#include "fairmask/metrics.hpp"
#include "fairmask/preprocess.hpp"
#include "fairmask/report.hpp"

namespace py = pybind11;
using namespace fairmask;

namespace {

std::vector<std::vector<double>> features_as_rows(const Dataset& d) {
    std::vector<std::vector<double>> rows(d.n_rows);
    for (std::size_t r = 0; r < d.n_rows; ++r) {
        auto span = d.row(r);
        rows[r].assign(span.begin(), span.end());
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_fairmask, m) {
    m.doc() = "fair classification via sensitive-feature masking";

    py::enum_<ModelFamily>(m, "ModelFamily")
        .value("logistic", ModelFamily::logistic)
        .value("linear_svm", ModelFamily::linear_svm)
        .value("mlp", ModelFamily::mlp)
        .value("constant", ModelFamily::constant);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<>())
        .def_readonly("n_rows", &Dataset::n_rows)
        .def_readonly("n_cols", &Dataset::n_cols)
        .def_readonly("labels", &Dataset::labels)
        .def_readonly("group_id", &Dataset::group_id)
        .def_readonly("sensitive_index_set", &Dataset::sensitive_index_set)
        .def_readonly("column_names", &Dataset::column_names)
        .def("rows", &features_as_rows)
        .def("protected_flags", &Dataset::protected_flags);

    py::class_<SplitFractions>(m, "SplitFractions")
        .def(py::init<>())
        .def_readwrite("train", &SplitFractions::train)
        .def_readwrite("validation", &SplitFractions::validation)
        .def_readwrite("test", &SplitFractions::test);

    py::class_<Split>(m, "Split")
        .def_readonly("train", &Split::train)
        .def_readonly("validation", &Split::validation)
        .def_readonly("test", &Split::test)
        .def_readonly("seed", &Split::seed);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("l2_penalty", &TrainConfig::l2_penalty)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("convergence_tol", &TrainConfig::convergence_tol)
        .def_readwrite("allow_single_label", &TrainConfig::allow_single_label);

    py::class_<MlpArchitecture>(m, "MlpArchitecture")
        .def(py::init<>())
        .def_readwrite("hidden_layers", &MlpArchitecture::hidden_layers);

    py::class_<MaskSpec>(m, "MaskSpec")
        .def(py::init<>())
        .def_readwrite("sensitive_index_set", &MaskSpec::sensitive_index_set)
        .def_readwrite("reference_values", &MaskSpec::reference_values)
        .def_static("zeros", &MaskSpec::zeros);

    py::class_<ScoreModel>(m, "ScoreModel")
        .def_readonly("family", &ScoreModel::family)
        .def_readwrite("tau", &ScoreModel::tau)
        .def_readonly("warnings", &ScoreModel::warnings)
        .def("score",
             [](const ScoreModel& self, const std::vector<double>& x) {
                 return self.score(std::span<const double>(x));
             })
        .def("decide",
             [](const ScoreModel& self, const std::vector<double>& x) {
                 return self.decide(std::span<const double>(x));
             })
        .def("weights",
             [](const ScoreModel& self) {
                 if (!self.is_linear_family())
                     throw std::invalid_argument("weights: linear families only");
                 return self.linear().weights;
             })
        .def("intercept",
             [](const ScoreModel& self) {
                 if (!self.is_linear_family())
                     throw std::invalid_argument("intercept: linear families only");
                 return self.linear().intercept;
             })
        .def("serialize", &serialize_model);

    py::class_<TauGrid>(m, "TauGrid")
        .def(py::init([](double lo, double hi, std::size_t count) {
                 return TauGrid{lo, hi, count};
             }),
             py::arg("lo"), py::arg("hi"), py::arg("count") = 101)
        .def_readwrite("lo", &TauGrid::lo)
        .def_readwrite("hi", &TauGrid::hi)
        .def_readwrite("count", &TauGrid::count)
        .def("values", &TauGrid::values)
        .def_static("covering", &TauGrid::covering, py::arg("model"), py::arg("dataset"),
                    py::arg("mask"), py::arg("count") = 101);

    py::class_<TauSweepPoint>(m, "TauSweepPoint")
        .def_readonly("tau", &TauSweepPoint::tau)
        .def_readonly("accuracy", &TauSweepPoint::accuracy)
        .def_readonly("group_discr", &TauSweepPoint::group_discr)
        .def_readonly("on_frontier", &TauSweepPoint::on_frontier)
        .def_readonly("column_gaps", &TauSweepPoint::column_gaps);

    py::class_<TauSweepResult>(m, "TauSweepResult")
        .def_readonly("points", &TauSweepResult::points)
        .def_readonly("tau_star", &TauSweepResult::tau_star)
        .def("export_table", [](const TauSweepResult& self) { return export_sweep_table(self); });

    py::class_<EvalFrame>(m, "EvalFrame")
        .def(py::init<>())
        .def_readwrite("labels", &EvalFrame::labels)
        .def_readwrite("predictions", &EvalFrame::predictions)
        .def_readwrite("reference_scores", &EvalFrame::reference_scores)
        .def_readwrite("candidate_scores", &EvalFrame::candidate_scores)
        .def_readwrite("group", &EvalFrame::group)
        .def_readwrite("protected_flag", &EvalFrame::protected_flag);

    py::class_<SyntheticSpec>(m, "SyntheticSpec")
        .def(py::init<>())
        .def_readwrite("n", &SyntheticSpec::n)
        .def_readwrite("rho", &SyntheticSpec::rho)
        .def_readwrite("base_rate_protected", &SyntheticSpec::base_rate_protected)
        .def_readwrite("base_rate_unprotected", &SyntheticSpec::base_rate_unprotected)
        .def_readwrite("noise", &SyntheticSpec::noise)
        .def_readwrite("seed", &SyntheticSpec::seed);

    py::class_<FairnessReport>(m, "FairnessReport")
        .def_readonly("algorithm", &FairnessReport::algorithm)
        .def_readonly("accuracy", &FairnessReport::accuracy)
        .def_readonly("admit_protected", &FairnessReport::admit_protected)
        .def_readonly("admit_unprotected", &FairnessReport::admit_unprotected)
        .def_readonly("group_discr", &FairnessReport::group_discr)
        .def_readonly("latent_discr", &FairnessReport::latent_discr)
        .def_readonly("strict_latent_discr", &FairnessReport::strict_latent_discr);

    py::class_<ComparisonResult>(m, "ComparisonResult")
        .def_readonly("mean_rows", &ComparisonResult::mean_rows)
        .def_readonly("notes", &ComparisonResult::notes)
        .def("table", [](const ComparisonResult& self) { return render_report_table(self); });

    m.def("toy_table2", &toy_table2);
    m.def("synthesize", &synthesize);
    m.def("split_dataset", &split_dataset, py::arg("dataset"), py::arg("fractions"),
          py::arg("seed"));
    m.def("train_logistic", &train_logistic);
    m.def("train_linear_svm", &train_linear_svm);
    m.def("train_mlp", &train_mlp);
    m.def("predict_scores", &predict_scores);
    m.def("predict_decisions", &predict_decisions);
    m.def("mask", &mask);
    m.def("select_tau", &select_tau);
    m.def("train_then_mask", &train_then_mask, py::arg("train"), py::arg("validation"),
          py::arg("mask"), py::arg("family"), py::arg("config"), py::arg("grid"),
          py::arg("arch") = MlpArchitecture{});
    m.def("tau_sweep", &tau_sweep);
    m.def("unconstrained", &unconstrained, py::arg("train"), py::arg("family"), py::arg("config"),
          py::arg("arch") = MlpArchitecture{});
    m.def("omit_sensitive", &omit_sensitive, py::arg("train"), py::arg("family"),
          py::arg("config"), py::arg("arch") = MlpArchitecture{});
    m.def("majority", &majority);
    py::class_<MassageResult>(m, "MassageResult")
        .def_readonly("model", &MassageResult::model)
        .def_readonly("promotions", &MassageResult::promotions)
        .def_readonly("demotions", &MassageResult::demotions)
        .def_readonly("post_gap", &MassageResult::post_gap)
        .def_readonly("relabeled_train", &MassageResult::relabeled_train);
    m.def("massage", &massage, py::arg("train"), py::arg("ranker_config"), py::arg("family"),
          py::arg("config"), py::arg("arch") = MlpArchitecture{});
    m.def("accuracy", &accuracy);
    m.def("admittance", [](const EvalFrame& f) {
        const auto a = admittance(f);
        return std::make_pair(a.admit_protected, a.admit_unprotected);
    });
    m.def("group_discrimination", &group_discrimination);
    m.def("latent_discrimination", &latent_discrimination);
    m.def("strict_latent_discrimination", &strict_latent_discrimination);
    m.def("knn_consistency", &knn_consistency, py::arg("values"), py::arg("offset"),
          py::arg("dataset"), py::arg("k"));
    m.def("deserialize_model", &deserialize_model);
    m.def(
        "load_dataset",
        [](const std::string& csv_path, const std::string& schema_path) {
            const auto schema = load_schema(schema_path);
            const auto table = load_csv(csv_path, schema);
            auto fitted = fit_preprocess(table, schema);
            return std::make_pair(fitted.dataset, fitted.plan.mask_spec());
        },
        "load a CSV + schema and fit the preprocessing on the whole file; "
        "returns (dataset, mask_spec)");
    m.def(
        "run_comparison",
        [](const Dataset& d, std::optional<MaskSpec> mask_spec, ModelFamily family,
           std::uint64_t seed, std::size_t repeats) {
            CompareConfig cfg;
            cfg.family = family;
            cfg.seed = seed;
            cfg.repeats = repeats;
            return run_comparison(d, std::move(mask_spec), cfg);
        },
        py::arg("dataset"), py::arg("mask") = std::nullopt,
        py::arg("family") = ModelFamily::logistic, py::arg("seed") = 0, py::arg("repeats") = 1);
}
