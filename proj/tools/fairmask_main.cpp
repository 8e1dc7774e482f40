#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairmask/cli_commands.hpp"

namespace {

struct RepeatsFlag {
    std::vector<std::string> raw;
    CLI::Option* option = nullptr;

    // bare --repeats means the default ten-run averaging; a value overrides
    std::size_t resolve() const {
        if (!option || option->count() == 0) return 1;
        if (raw.empty() || raw.back().empty()) return 10;
        return static_cast<std::size_t>(std::stoull(raw.back()));
    }
};

void add_common(CLI::App* cmd, fairmask::cli::CommonOptions& opt, RepeatsFlag& repeats) {
    cmd->add_option("--data", opt.data_path, "input CSV file")->required();
    cmd->add_option("--schema", opt.schema_path, "schema config file")->required();
    cmd->add_option("--family", opt.family, "model family: logistic|svm|mlp")
        ->check(CLI::IsMember({"logistic", "svm", "linear_svm", "mlp"}));
    cmd->add_option("--seed", opt.seed, "base random seed");
    repeats.option = cmd->add_option("--repeats", repeats.raw,
                                     "average over seeded runs; bare flag means 10, a value overrides")
                         ->expected(0, 1);
    cmd->add_option_function<std::string>(
        "--split",
        [&opt](const std::string& v) {
            double a = 0, b = 0, c = 0;
            char c1 = 0, c2 = 0;
            std::istringstream in(v);
            if (!(in >> a >> c1 >> b >> c2 >> c) || c1 != ',' || c2 != ',' || !in.eof())
                throw CLI::ValidationError("--split expects train,validation,test fractions");
            opt.fractions = {a, b, c};
        },
        "train,validation,test fractions (default 0.6,0.2,0.2)");
    cmd->add_option_function<std::string>(
        "--tau-grid", [&opt](const std::string& v) { opt.tau_grid = v; },
        "tau grid as lo:hi:count (default: auto over validation scores)");
    cmd->add_option_function<std::size_t>(
        "--k", [&opt](std::size_t v) { opt.k = v; }, "neighbour count for consistency");
    cmd->add_option("--out", opt.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairness-aware classification toolkit: trains linear and MLP classifiers, "
                 "masks sensitive features at prediction time, and reports "
                 "accuracy/discrimination comparisons"};
    app.require_subcommand(1);

    fairmask::cli::CommonOptions compare_opt, sweep_opt, consistency_opt;
    fairmask::cli::SynthOptions synth_opt;
    RepeatsFlag compare_repeats, sweep_repeats, consistency_repeats;

    auto* compare = app.add_subcommand("compare", "run all algorithms and write a report");
    add_common(compare, compare_opt, compare_repeats);

    auto* sweep = app.add_subcommand("sweep", "accuracy/discrimination trade-off over tau");
    add_common(sweep, sweep_opt, sweep_repeats);

    auto* consistency =
        app.add_subcommand("consistency", "own score vs k-nearest-neighbour mean score");
    add_common(consistency, consistency_opt, consistency_repeats);

    auto* synth = app.add_subcommand("synth", "write a synthetic or bundled dataset + schema");
    synth->add_flag("--toy", synth_opt.toy, "write the bundled 8-row admissions example");
    synth->add_option("--n", synth_opt.spec.n, "rows");
    synth->add_option("--rho", synth_opt.spec.rho, "sensitive/proxy correlation in [-1,1]");
    synth->add_option("--base-rate-protected", synth_opt.spec.base_rate_protected);
    synth->add_option("--base-rate-unprotected", synth_opt.spec.base_rate_unprotected);
    synth->add_option("--noise", synth_opt.spec.noise, "latent noise scale");
    synth->add_option("--seed", synth_opt.spec.seed);
    synth->add_option("--out", synth_opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        compare_opt.repeats = compare_repeats.resolve();
        sweep_opt.repeats = sweep_repeats.resolve();
        consistency_opt.repeats = consistency_repeats.resolve();

        std::vector<std::string> written;
        if (compare->parsed()) written = fairmask::cli::cmd_compare(compare_opt);
        else if (sweep->parsed()) written = fairmask::cli::cmd_sweep(sweep_opt);
        else if (consistency->parsed()) written = fairmask::cli::cmd_consistency(consistency_opt);
        else if (synth->parsed()) written = fairmask::cli::cmd_synth(synth_opt);
        for (const auto& p : written) std::cout << "wrote " << p << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
