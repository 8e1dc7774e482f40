#include "fairmask/fixtures.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fairmask/rng.hpp"
#include "fairmask/score_model.hpp"

namespace fairmask {

Dataset toy_table2() {
    // (admission, sensitive, sat, extracurricular), row ids 1..8
    constexpr double rows[8][4] = {
        {1, 1, 1600, 4}, {1, 1, 1500, 6}, {1, 1, 1500, 4}, {0, 1, 1400, 6},
        {1, 0, 1400, 6}, {1, 0, 1300, 5}, {0, 0, 1200, 4}, {0, 0, 1200, 4},
    };
    Dataset d;
    d.n_rows = 8;
    d.n_cols = 3;
    d.column_names = {"sensitive", "sat", "extracurricular"};
    d.sensitive_index_set = {0};
    for (const auto& row : rows) {
        d.labels.push_back(static_cast<int>(row[0]));
        d.features.push_back(row[1]);
        d.features.push_back(row[2]);
        d.features.push_back(row[3]);
    }
    for (std::size_t i = 1; i <= 8; ++i) d.row_ids.push_back(i);
    d.assign_group_ids();
    return d;
}

std::string toy_table2_csv() {
    std::ostringstream out;
    out << "admission,sensitive,sat,extracurricular\n";
    const Dataset d = toy_table2();
    for (std::size_t r = 0; r < d.n_rows; ++r) {
        out << d.labels[r];
        for (std::size_t c = 0; c < d.n_cols; ++c)
            out << ',' << static_cast<long long>(d.at(r, c));
        out << '\n';
    }
    return out.str();
}

DatasetSchema toy_table2_schema() {
    DatasetSchema schema;
    schema.columns = {{"admission", ColumnKind::categorical},
                      {"sensitive", ColumnKind::numeric},
                      {"sat", ColumnKind::numeric},
                      {"extracurricular", ColumnKind::numeric}};
    schema.label_column = "admission";
    schema.positive_label = "1";
    schema.sensitive_columns.push_back({"sensitive", "0", "", std::nullopt});
    schema.validate();
    return schema;
}

void SyntheticSpec::validate() const {
    if (n < 10) throw std::invalid_argument("synthesize: n must be >= 10");
    if (!(rho >= -1.0 && rho <= 1.0))
        throw std::invalid_argument("synthesize: rho must lie in [-1, 1]");
    if (!(base_rate_protected > 0.0 && base_rate_protected < 1.0) ||
        !(base_rate_unprotected > 0.0 && base_rate_unprotected < 1.0))
        throw std::invalid_argument("synthesize: base rates must lie in (0, 1)");
    if (noise < 0.0) throw std::invalid_argument("synthesize: noise must be >= 0");
}

Dataset synthesize(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    Dataset d;
    d.n_rows = spec.n;
    d.n_cols = 4;
    d.column_names = {"sensitive", "proxy", "skill", "extra"};
    d.sensitive_index_set = {0};
    d.features.reserve(spec.n * 4);
    d.labels.reserve(spec.n);

    const double logit_p = std::log(spec.base_rate_protected / (1.0 - spec.base_rate_protected));
    const double logit_u =
        std::log(spec.base_rate_unprotected / (1.0 - spec.base_rate_unprotected));

    for (std::size_t i = 0; i < spec.n; ++i) {
        const int s = rng.next_double() < 0.5 ? 1 : 0;
        const double spm = s == 1 ? 1.0 : -1.0;  // +-1 with unit variance
        const double proxy =
            spec.rho * spm + std::sqrt(1.0 - spec.rho * spec.rho) * rng.next_normal();
        const double skill = rng.next_normal();
        const double extra = rng.next_normal();
        const double group_offset = s == 1 ? logit_p : logit_u;
        // the proxy carries the same disadvantage direction as the group
        // offset, so omitting the sensitive bit lets it stand in for it
        const double latent = 1.2 * skill - 0.8 * proxy + group_offset +
                              spec.noise * rng.next_normal();
        const int y = rng.next_double() < sigmoid(latent) ? 1 : 0;
        d.features.push_back(static_cast<double>(s));
        d.features.push_back(proxy);
        d.features.push_back(skill);
        d.features.push_back(extra);
        d.labels.push_back(y);
        d.row_ids.push_back(i);
    }
    d.assign_group_ids();
    return d;
}

DatasetSchema synthetic_schema() {
    DatasetSchema schema;
    schema.columns = {{"label", ColumnKind::categorical},
                      {"sensitive", ColumnKind::numeric},
                      {"proxy", ColumnKind::numeric},
                      {"skill", ColumnKind::numeric},
                      {"extra", ColumnKind::numeric}};
    schema.label_column = "label";
    schema.positive_label = "1";
    schema.sensitive_columns.push_back({"sensitive", "0", "", std::nullopt});
    schema.validate();
    return schema;
}

std::string dataset_to_csv(const Dataset& d, const std::string& label_name) {
    std::ostringstream out;
    out << label_name;
    for (std::size_t c = 0; c < d.n_cols; ++c)
        out << ',' << (c < d.column_names.size() ? d.column_names[c] : "c" + std::to_string(c));
    out << '\n';
    for (std::size_t r = 0; r < d.n_rows; ++r) {
        out << d.labels[r];
        for (std::size_t c = 0; c < d.n_cols; ++c) out << ',' << format_double(d.at(r, c));
        out << '\n';
    }
    return out.str();
}

}  // namespace fairmask
