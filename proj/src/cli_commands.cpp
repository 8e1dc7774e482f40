#include "fairmask/cli_commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fairmask::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects output paths so every partially written file can be removed if a
// later stage throws.
class OutputSet {
public:
    explicit OutputSet(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

    void write(const std::string& name, const std::string& contents) {
        const std::string p = path(name);
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("write: cannot open '" + p + "'");
        out << contents;
        if (!out) throw std::runtime_error("write: failed writing '" + p + "'");
        written_.push_back(p);
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        written_.clear();
    }

    std::vector<std::string> take() { return std::move(written_); }

private:
    std::string dir_;
    std::vector<std::string> written_;
};

struct LoadedInputs {
    RawTable table;
    DatasetSchema schema;
};

LoadedInputs load_inputs(const CommonOptions& opt) {
    LoadedInputs in;
    in.schema = load_schema(opt.schema_path);
    in.table = load_csv(opt.data_path, in.schema);
    return in;
}

CompareConfig make_config(const CommonOptions& opt) {
    CompareConfig cfg;
    cfg.family = family_from_name(opt.family);
    cfg.seed = opt.seed;
    cfg.repeats = opt.repeats;
    cfg.fractions = opt.fractions;
    if (opt.tau_grid) cfg.tau_grid = parse_tau_grid(*opt.tau_grid);
    return cfg;
}

json config_json(const CommonOptions& opt, const CompareConfig& cfg) {
    json grid;
    if (cfg.tau_grid)
        grid = {{"lo", cfg.tau_grid->lo}, {"hi", cfg.tau_grid->hi}, {"count", cfg.tau_grid->count}};
    else
        grid = {{"mode", "auto"}, {"count", cfg.tau_grid_count}};
    return json{
        {"data", opt.data_path},
        {"schema", opt.schema_path},
        {"family", family_name(cfg.family)},
        {"seed", cfg.seed},
        {"repeats", cfg.repeats},
        {"split", {cfg.fractions.train, cfg.fractions.validation, cfg.fractions.test}},
        {"tau_grid", grid},
        {"train",
         {{"learning_rate", cfg.train.learning_rate},
          {"epochs", cfg.train.epochs},
          {"l2_penalty", cfg.train.l2_penalty},
          {"batch_size", cfg.train.batch_size ? json(*cfg.train.batch_size) : json("full")},
          {"convergence_tol", cfg.train.convergence_tol}}},
        {"mlp_hidden_layers", cfg.arch.hidden_layers},
        {"exact_pair_limit", cfg.exact_pair_limit},
        {"subsample_pairs", cfg.subsample_pairs},
    };
}

json report_row_json(const FairnessReport& row) {
    json j{{"algorithm", row.algorithm},
           {"accuracy", row.accuracy},
           {"admit_protected", row.admit_protected},
           {"admit_unprotected", row.admit_unprotected},
           {"group_discr", row.group_discr}};
    j["latent_discr"] = row.latent_discr ? json(*row.latent_discr) : json(nullptr);
    j["strict_latent_discr"] =
        row.strict_latent_discr ? json(*row.strict_latent_discr) : json(nullptr);
    if (row.latent_std_error) j["latent_std_error"] = *row.latent_std_error;
    if (row.massage_promotions) j["massage_promotions"] = *row.massage_promotions;
    if (row.massage_demotions) j["massage_demotions"] = *row.massage_demotions;
    if (!row.notes.empty()) j["notes"] = row.notes;
    return j;
}

}  // namespace

TauGrid parse_tau_grid(const std::string& text) {
    TauGrid grid;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(text);
    long long count = 0;
    if (!(in >> grid.lo >> colon1 >> grid.hi >> colon2 >> count) || colon1 != ':' ||
        colon2 != ':' || !in.eof() || count < 1)
        throw std::invalid_argument("--tau-grid expects lo:hi:count, got '" + text + "'");
    grid.count = static_cast<std::size_t>(count);
    grid.validate();
    return grid;
}

std::vector<std::string> cmd_compare(const CommonOptions& opt) {
    OutputSet outputs(opt.out_dir);
    try {
        const auto in = load_inputs(opt);
        const auto cfg = make_config(opt);
        const auto result = run_comparison(in.table, in.schema, cfg);

        std::ostringstream text;
        text << "fairmask compare  (repeats=" << std::max<std::size_t>(1, cfg.repeats)
             << ", family=" << family_name(cfg.family) << ", seed=" << cfg.seed << ")\n";
        if (in.table.dropped_missing > 0)
            text << "note: dropped " << in.table.dropped_missing
                 << " rows with missing values\n";
        text << render_report_table(result);
        outputs.write("report.txt", text.str());

        json doc;
        doc["config"] = config_json(opt, cfg);
        doc["repeats"] = std::max<std::size_t>(1, cfg.repeats);
        doc["dropped_missing_rows"] = in.table.dropped_missing;
        doc["algorithms"] = json::array();
        for (const auto& row : result.mean_rows) doc["algorithms"].push_back(row.algorithm);
        doc["metrics"] = json::object();
        for (const auto& row : result.mean_rows)
            doc["metrics"][row.algorithm] = report_row_json(row);
        doc["per_seed"] = json::array();
        for (const auto& run : result.runs) {
            json r{{"seed", run.seed}, {"rows", json::array()}};
            for (const auto& row : run.rows) r["rows"].push_back(report_row_json(row));
            doc["per_seed"].push_back(std::move(r));
        }
        if (!result.notes.empty()) doc["notes"] = result.notes;
        outputs.write("report.json", doc.dump(2) + "\n");
        return outputs.take();
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

std::vector<std::string> cmd_sweep(const CommonOptions& opt) {
    OutputSet outputs(opt.out_dir);
    try {
        const auto in = load_inputs(opt);
        const auto cfg = make_config(opt);
        const auto prepared = prepare_split(in.table, in.schema, cfg.fractions, cfg.seed);
        const ScoreModel h_star =
            unconstrained(prepared.split.train, cfg.family, cfg.train, cfg.arch);
        const TauGrid grid =
            cfg.tau_grid ? *cfg.tau_grid
                         : TauGrid::covering(h_star, prepared.split.validation, prepared.mask,
                                             cfg.tau_grid_count);
        // sweep over the validation set: tau_star then marks the
        // accuracy-maximizing choice, the same rule the selection step uses
        const auto result = tau_sweep(h_star, prepared.split.validation, prepared.mask, grid);

        // re-verify the frontier flags before anything is written
        for (std::size_t i = 0; i < result.points.size(); ++i) {
            for (std::size_t j = 0; j < result.points.size(); ++j) {
                const auto& a = result.points[i];
                const auto& b = result.points[j];
                const bool dominates =
                    b.accuracy >= a.accuracy && b.group_discr <= a.group_discr &&
                    (b.accuracy > a.accuracy || b.group_discr < a.group_discr);
                if (a.on_frontier && dominates)
                    throw std::logic_error("sweep: frontier point is dominated");
            }
        }

        std::ostringstream meta;
        meta << "# fairmask sweep  family=" << family_name(cfg.family) << " seed=" << cfg.seed
             << " grid=" << format_double(grid.lo) << ':' << format_double(grid.hi) << ':'
             << grid.count << '\n';
        outputs.write("sweep.csv", meta.str() + export_sweep_table(result, true));
        return outputs.take();
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

std::vector<std::string> cmd_consistency(const CommonOptions& opt) {
    OutputSet outputs(opt.out_dir);
    try {
        const auto in = load_inputs(opt);
        const auto cfg = make_config(opt);
        const auto prepared = prepare_split(in.table, in.schema, cfg.fractions, cfg.seed);
        ScoreModel model = unconstrained(prepared.split.train, cfg.family, cfg.train, cfg.arch);
        model.mask = prepared.mask;
        model.tau = 0.0;  // the consistency run pins tau at zero

        // k defaults to 10 for large datasets, 5 otherwise
        const std::size_t k = opt.k ? *opt.k : (in.table.rows.size() >= 10000 ? 10 : 5);
        const Dataset& test = prepared.split.test;
        std::vector<double> base(test.n_rows);
        for (std::size_t r = 0; r < test.n_rows; ++r) base[r] = model.score(test.row(r));
        const auto points = knn_consistency(base, model.tau, test, k);

        std::ostringstream out;
        out << "# fairmask consistency  family=" << family_name(cfg.family)
            << " seed=" << cfg.seed << " k=" << k << " tau=" << format_double(model.tau) << '\n';
        out << "own_score,knn_mean_score\n";
        for (const auto& [own, knn] : points)
            out << format_double(own) << ',' << format_double(knn) << '\n';
        outputs.write("consistency.csv", out.str());
        return outputs.take();
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

std::vector<std::string> cmd_synth(const SynthOptions& opt) {
    OutputSet outputs(opt.out_dir);
    try {
        if (opt.toy) {
            outputs.write("toy.csv", toy_table2_csv());
            outputs.write("toy.schema", format_schema(toy_table2_schema()));
        } else {
            const Dataset d = synthesize(opt.spec);
            outputs.write("synthetic.csv", dataset_to_csv(d));
            outputs.write("synthetic.schema", format_schema(synthetic_schema()));
        }
        return outputs.take();
    } catch (...) {
        outputs.discard_all();
        throw;
    }
}

}  // namespace fairmask::cli
