#include "fairmask/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fairmask {

MaskSpec PreprocessPlan::mask_spec() const {
    MaskSpec spec;
    spec.sensitive_index_set = sensitive_index_set;
    for (const auto& col : columns)
        if (col.action == ColumnPlan::Action::sensitive_binary)
            spec.reference_values.push_back(col.mask_value);
    return spec;
}

namespace {

double parse_number(const std::string& s, const std::string& column) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("preprocess: column '" + column + "': cannot parse '" + s +
                                    "' as a number");
    }
}

const SensitiveColumn* find_sensitive(const DatasetSchema& schema, const std::string& name) {
    for (const auto& s : schema.sensitive_columns)
        if (s.name == name) return &s;
    return nullptr;
}

double encode_sensitive(const ColumnPlan& plan, const std::string& raw,
                        const std::string& column) {
    if (plan.binarize_leq) {
        return parse_number(raw, column) <= *plan.binarize_leq ? 1.0 : 0.0;
    }
    if (!plan.protected_level.empty()) {
        if (std::find(plan.levels.begin(), plan.levels.end(), raw) == plan.levels.end())
            throw std::invalid_argument("preprocess: column '" + column + "': unseen level '" +
                                        raw + "'");
        return raw == plan.protected_level ? 1.0 : 0.0;
    }
    // numeric passthrough; training data must have been 0/1
    const double v = parse_number(raw, column);
    if (v != 0.0 && v != 1.0)
        throw std::invalid_argument("preprocess: sensitive column '" + column +
                                    "' must be 0/1 (got " + raw +
                                    "); declare protected_level or binarize_leq instead");
    return v;
}

}  // namespace

static Dataset encode_table(const RawTable& table, const DatasetSchema& schema,
                            const PreprocessPlan& plan) {
    const std::size_t label_idx = table.column_index(schema.label_column);
    Dataset d;
    d.n_rows = table.rows.size();
    if (d.n_rows == 0) throw std::invalid_argument("preprocess: no data rows");
    d.column_names = plan.encoded_column_names;
    d.n_cols = plan.encoded_column_names.size();
    d.sensitive_index_set = plan.sensitive_index_set;
    d.features.reserve(d.n_rows * d.n_cols);
    d.labels.reserve(d.n_rows);
    d.row_ids = table.source_row_numbers;

    std::vector<std::size_t> col_idx;
    col_idx.reserve(plan.columns.size());
    for (const auto& col : plan.columns) col_idx.push_back(table.column_index(col.name));

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t pc = 0; pc < plan.columns.size(); ++pc) {
            const auto& col = plan.columns[pc];
            const std::string& raw = row[col_idx[pc]];
            switch (col.action) {
                case ColumnPlan::Action::standardize: {
                    const double v = parse_number(raw, col.name);
                    d.features.push_back(col.stddev == 0.0 ? 0.0 : (v - col.mean) / col.stddev);
                    break;
                }
                case ColumnPlan::Action::one_hot: {
                    auto it = std::find(col.levels.begin(), col.levels.end(), raw);
                    if (it == col.levels.end())
                        throw std::invalid_argument("preprocess: column '" + col.name +
                                                    "': unseen level '" + raw + "'");
                    for (std::size_t l = 0; l < col.levels.size(); ++l)
                        d.features.push_back(col.levels[l] == raw ? 1.0 : 0.0);
                    break;
                }
                case ColumnPlan::Action::sensitive_binary:
                    d.features.push_back(encode_sensitive(col, raw, col.name));
                    break;
            }
        }
        d.labels.push_back(row[label_idx] == plan.positive_label ? 1 : 0);
    }
    d.assign_group_ids();
    return d;
}

PreprocessResult fit_preprocess(const RawTable& table, const DatasetSchema& schema) {
    schema.validate();
    if (table.rows.empty()) throw std::invalid_argument("preprocess: no data rows");

    PreprocessPlan plan;
    plan.positive_label = schema.positive_label;

    for (const auto& [name, kind] : schema.columns) {
        if (name == schema.label_column) continue;
        const std::size_t ci = table.column_index(name);
        ColumnPlan col;
        col.name = name;
        if (const SensitiveColumn* sens = find_sensitive(schema, name)) {
            col.action = ColumnPlan::Action::sensitive_binary;
            col.protected_level = sens->protected_level;
            col.binarize_leq = sens->binarize_leq;
            // freeze observed levels (categorical) and validate mask_reference
            if (!sens->protected_level.empty()) {
                for (const auto& row : table.rows) {
                    const std::string& v = row[ci];
                    if (std::find(col.levels.begin(), col.levels.end(), v) == col.levels.end())
                        col.levels.push_back(v);
                }
                if (std::find(col.levels.begin(), col.levels.end(), sens->mask_reference) ==
                    col.levels.end())
                    throw std::invalid_argument("preprocess: mask_reference '" +
                                                sens->mask_reference + "' never occurs in column '" +
                                                name + "'");
                col.mask_value = sens->mask_reference == sens->protected_level ? 1.0 : 0.0;
            } else {
                col.mask_value = encode_sensitive(col, sens->mask_reference, name);
                bool seen = false;
                for (const auto& row : table.rows) {
                    const double v = encode_sensitive(col, row[ci], name);
                    if (v == col.mask_value) seen = true;
                }
                if (!seen)
                    throw std::invalid_argument("preprocess: mask_reference '" +
                                                sens->mask_reference + "' never occurs in column '" +
                                                name + "'");
            }
        } else if (kind == ColumnKind::numeric) {
            col.action = ColumnPlan::Action::standardize;
            double sum = 0.0;
            for (const auto& row : table.rows) sum += parse_number(row[ci], name);
            col.mean = sum / static_cast<double>(table.rows.size());
            double ss = 0.0;
            for (const auto& row : table.rows) {
                const double dv = parse_number(row[ci], name) - col.mean;
                ss += dv * dv;
            }
            col.stddev = std::sqrt(ss / static_cast<double>(table.rows.size()));
            if (col.stddev == 0.0)
                plan.warnings.push_back("column '" + name +
                                        "' has zero variance; encoded as all zeros");
        } else {
            col.action = ColumnPlan::Action::one_hot;
            for (const auto& row : table.rows) {
                const std::string& v = row[ci];
                if (std::find(col.levels.begin(), col.levels.end(), v) == col.levels.end())
                    col.levels.push_back(v);
            }
        }
        plan.columns.push_back(std::move(col));
    }

    // encoded layout: schema order, one-hot expands in level order
    std::size_t idx = 0;
    for (const auto& col : plan.columns) {
        switch (col.action) {
            case ColumnPlan::Action::standardize:
                plan.encoded_column_names.push_back(col.name);
                ++idx;
                break;
            case ColumnPlan::Action::one_hot:
                for (const auto& level : col.levels)
                    plan.encoded_column_names.push_back(col.name + "=" + level);
                idx += col.levels.size();
                break;
            case ColumnPlan::Action::sensitive_binary:
                plan.sensitive_index_set.push_back(idx);
                plan.encoded_column_names.push_back(col.name);
                ++idx;
                break;
        }
    }

    PreprocessResult result;
    result.plan = plan;
    result.dataset = encode_table(table, schema, plan);
    return result;
}

Dataset apply_preprocess(const RawTable& table, const DatasetSchema& schema,
                         const PreprocessPlan& plan) {
    return encode_table(table, schema, plan);
}

std::string serialize_plan(const PreprocessPlan& plan) {
    std::ostringstream out;
    out << "fairmask-plan v1\n";
    out << "positive_label " << plan.positive_label << '\n';
    for (const auto& col : plan.columns) {
        switch (col.action) {
            case ColumnPlan::Action::standardize:
                out << "standardize " << col.name << ' ' << format_double(col.mean) << ' '
                    << format_double(col.stddev) << '\n';
                break;
            case ColumnPlan::Action::one_hot:
                out << "one_hot " << col.name;
                for (const auto& level : col.levels) out << ' ' << level;
                out << '\n';
                break;
            case ColumnPlan::Action::sensitive_binary:
                out << "sensitive " << col.name << " mask_value=" << format_double(col.mask_value);
                if (!col.protected_level.empty()) {
                    out << " protected_level=" << col.protected_level << " levels=";
                    for (std::size_t l = 0; l < col.levels.size(); ++l)
                        out << (l ? "," : "") << col.levels[l];
                }
                if (col.binarize_leq) out << " binarize_leq=" << format_double(*col.binarize_leq);
                out << '\n';
                break;
        }
    }
    return out.str();
}

PreprocessPlan deserialize_plan(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "fairmask-plan v1")
        throw std::invalid_argument("plan: bad or missing header");
    PreprocessPlan plan;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "positive_label") {
            ls >> plan.positive_label;
        } else if (key == "standardize") {
            ColumnPlan col;
            col.action = ColumnPlan::Action::standardize;
            ls >> col.name >> col.mean >> col.stddev;
            if (ls.fail()) throw std::invalid_argument("plan: malformed line '" + line + "'");
            plan.columns.push_back(std::move(col));
        } else if (key == "one_hot") {
            ColumnPlan col;
            col.action = ColumnPlan::Action::one_hot;
            ls >> col.name;
            std::string level;
            while (ls >> level) col.levels.push_back(level);
            plan.columns.push_back(std::move(col));
        } else if (key == "sensitive") {
            ColumnPlan col;
            col.action = ColumnPlan::Action::sensitive_binary;
            ls >> col.name;
            std::string attr;
            while (ls >> attr) {
                const auto eq = attr.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("plan: malformed attribute '" + attr + "'");
                const std::string k = attr.substr(0, eq);
                const std::string v = attr.substr(eq + 1);
                if (k == "mask_value") col.mask_value = std::stod(v);
                else if (k == "protected_level") col.protected_level = v;
                else if (k == "binarize_leq") col.binarize_leq = std::stod(v);
                else if (k == "levels") {
                    std::istringstream lv(v);
                    std::string one;
                    while (std::getline(lv, one, ',')) col.levels.push_back(one);
                } else {
                    throw std::invalid_argument("plan: unknown attribute '" + k + "'");
                }
            }
            plan.columns.push_back(std::move(col));
        } else {
            throw std::invalid_argument("plan: unknown keyword '" + key + "'");
        }
    }
    // rebuild the derived layout
    std::size_t idx = 0;
    for (const auto& col : plan.columns) {
        switch (col.action) {
            case ColumnPlan::Action::standardize:
                plan.encoded_column_names.push_back(col.name);
                ++idx;
                break;
            case ColumnPlan::Action::one_hot:
                for (const auto& level : col.levels)
                    plan.encoded_column_names.push_back(col.name + "=" + level);
                idx += col.levels.size();
                break;
            case ColumnPlan::Action::sensitive_binary:
                plan.sensitive_index_set.push_back(idx);
                plan.encoded_column_names.push_back(col.name);
                ++idx;
                break;
        }
    }
    return plan;
}

}  // namespace fairmask
