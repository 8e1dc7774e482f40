#include "fairmask/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fairmask/rng.hpp"

namespace fairmask {

void DatasetSchema::validate() const {
    if (sensitive_columns.empty())
        throw std::invalid_argument("schema: at least one sensitive column is required");
    auto count_of = [&](const std::string& name) {
        return std::count_if(columns.begin(), columns.end(),
                             [&](const auto& c) { return c.first == name; });
    };
    for (const auto& c : columns) {
        if (count_of(c.first) != 1)
            throw std::invalid_argument("schema: duplicate column '" + c.first + "'");
    }
    if (count_of(label_column) != 1)
        throw std::invalid_argument("schema: label column '" + label_column +
                                    "' must appear exactly once in columns");
    for (const auto& s : sensitive_columns) {
        if (count_of(s.name) != 1)
            throw std::invalid_argument("schema: sensitive column '" + s.name +
                                        "' must appear exactly once in columns");
        if (s.name == label_column)
            throw std::invalid_argument("schema: label column cannot be sensitive");
    }
}

bool DatasetSchema::is_sensitive(const std::string& column_name) const {
    return std::any_of(sensitive_columns.begin(), sensitive_columns.end(),
                       [&](const auto& s) { return s.name == column_name; });
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

DatasetSchema parse_schema(const std::string& text) {
    DatasetSchema schema;
    std::istringstream in(text);
    std::string line;
    bool saw_magic = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        if (!saw_magic) {
            if (toks[0] != "fairmask-schema")
                throw std::invalid_argument("schema: missing 'fairmask-schema' header line");
            saw_magic = true;
            continue;
        }
        const std::string& kw = toks[0];
        auto need = [&](std::size_t n) {
            if (toks.size() < n + 1)
                throw std::invalid_argument("schema line " + std::to_string(lineno) +
                                            ": '" + kw + "' needs " + std::to_string(n) +
                                            " argument(s)");
        };
        if (kw == "column") {
            need(2);
            ColumnKind kind;
            if (toks[2] == "numeric") kind = ColumnKind::numeric;
            else if (toks[2] == "categorical") kind = ColumnKind::categorical;
            else throw std::invalid_argument("schema: unknown column kind '" + toks[2] + "'");
            schema.columns.emplace_back(toks[1], kind);
        } else if (kw == "label") {
            need(1);
            schema.label_column = toks[1];
        } else if (kw == "positive_label") {
            need(1);
            schema.positive_label = toks[1];
        } else if (kw == "sensitive") {
            need(1);
            SensitiveColumn s;
            s.name = toks[1];
            for (std::size_t i = 2; i < toks.size(); ++i) {
                auto eq = toks[i].find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("schema: expected key=value, got '" + toks[i] + "'");
                std::string key = toks[i].substr(0, eq);
                std::string val = toks[i].substr(eq + 1);
                if (key == "mask_reference") s.mask_reference = val;
                else if (key == "protected_level") s.protected_level = val;
                else if (key == "binarize_leq") s.binarize_leq = std::stod(val);
                else throw std::invalid_argument("schema: unknown sensitive attribute '" + key + "'");
            }
            if (s.mask_reference.empty())
                throw std::invalid_argument("schema: sensitive '" + s.name +
                                            "' is missing mask_reference");
            schema.sensitive_columns.push_back(std::move(s));
        } else {
            throw std::invalid_argument("schema: unknown keyword '" + kw + "'");
        }
    }
    if (!saw_magic) throw std::invalid_argument("schema: empty file");
    schema.validate();
    return schema;
}

DatasetSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("schema: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_schema(buf.str());
}

std::string format_schema(const DatasetSchema& schema) {
    std::ostringstream out;
    out << "fairmask-schema v1\n";
    for (const auto& [name, kind] : schema.columns)
        out << "column " << name << ' '
            << (kind == ColumnKind::numeric ? "numeric" : "categorical") << '\n';
    out << "label " << schema.label_column << '\n';
    out << "positive_label " << schema.positive_label << '\n';
    for (const auto& s : schema.sensitive_columns) {
        out << "sensitive " << s.name << " mask_reference=" << s.mask_reference;
        if (!s.protected_level.empty()) out << " protected_level=" << s.protected_level;
        if (s.binarize_leq) out << " binarize_leq=" << *s.binarize_leq;
        out << '\n';
    }
    return out.str();
}

void Dataset::assign_group_ids() {
    group_id.assign(n_rows, 0);
    std::map<std::vector<double>, int> seen;
    std::vector<double> key(sensitive_index_set.size());
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t k = 0; k < sensitive_index_set.size(); ++k)
            key[k] = at(r, sensitive_index_set[k]);
        auto [it, inserted] = seen.emplace(key, static_cast<int>(seen.size()));
        group_id[r] = it->second;
    }
}

std::vector<int> Dataset::protected_flags() const {
    if (sensitive_index_set.empty())
        throw std::invalid_argument("dataset: no sensitive columns");
    std::vector<int> flags(n_rows);
    const std::size_t c = sensitive_index_set.front();
    for (std::size_t r = 0; r < n_rows; ++r) flags[r] = at(r, c) != 0.0 ? 1 : 0;
    return flags;
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.n_rows = rows.size();
    out.n_cols = n_cols;
    out.sensitive_index_set = sensitive_index_set;
    out.column_names = column_names;
    out.features.reserve(rows.size() * n_cols);
    out.labels.reserve(rows.size());
    out.row_ids.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= n_rows) throw std::out_of_range("select_rows: row index out of range");
        auto rr = row(r);
        out.features.insert(out.features.end(), rr.begin(), rr.end());
        out.labels.push_back(labels[r]);
        out.row_ids.push_back(row_ids.empty() ? r : row_ids[r]);
    }
    out.assign_group_ids();
    return out;
}

Dataset Dataset::drop_columns(const std::vector<std::size_t>& cols) const {
    std::vector<bool> drop(n_cols, false);
    for (std::size_t c : cols) {
        if (c >= n_cols) throw std::out_of_range("drop_columns: column index out of range");
        drop[c] = true;
    }
    Dataset out;
    out.n_rows = n_rows;
    out.labels = labels;
    out.row_ids = row_ids;
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < n_cols; ++c)
        if (!drop[c]) kept.push_back(c);
    out.n_cols = kept.size();
    out.features.reserve(n_rows * kept.size());
    for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c : kept) out.features.push_back(at(r, c));
    if (!column_names.empty())
        for (std::size_t c : kept) out.column_names.push_back(column_names[c]);
    // remaining sensitive columns, reindexed
    for (std::size_t s : sensitive_index_set) {
        if (drop[s]) continue;
        auto pos = std::find(kept.begin(), kept.end(), s);
        out.sensitive_index_set.push_back(static_cast<std::size_t>(pos - kept.begin()));
    }
    if (out.n_rows > 0 && !out.sensitive_index_set.empty()) out.assign_group_ids();
    else out.group_id.assign(out.n_rows, 0);
    return out;
}

void Dataset::validate() const {
    if (n_rows == 0) throw std::invalid_argument("dataset: n_rows must be >= 1");
    if (features.size() != n_rows * n_cols)
        throw std::invalid_argument("dataset: feature matrix size mismatch");
    if (labels.size() != n_rows)
        throw std::invalid_argument("dataset: labels length mismatch");
    if (group_id.size() != n_rows)
        throw std::invalid_argument("dataset: group_id length mismatch");
    for (int y : labels)
        if (y != 0 && y != 1) throw std::invalid_argument("dataset: labels must be 0/1");
    for (std::size_t c : sensitive_index_set)
        if (c >= n_cols) throw std::invalid_argument("dataset: sensitive index out of range");
    for (double v : features)
        if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite feature value");
}

std::array<std::vector<std::size_t>, 3> split_indices(const std::vector<int>& labels,
                                                      SplitFractions fractions,
                                                      std::uint64_t seed) {
    const double f[3] = {fractions.train, fractions.validation, fractions.test};
    double sum = f[0] + f[1] + f[2];
    for (double v : f)
        if (!(v > 0.0)) throw std::invalid_argument("split: fractions must be positive");
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("split: fractions must sum to 1");

    const std::size_t n = labels.size();
    // target part sizes, largest remainder so they sum to n exactly
    std::array<std::size_t, 3> target{};
    {
        std::array<double, 3> exact{};
        std::size_t assigned = 0;
        for (int p = 0; p < 3; ++p) {
            exact[p] = f[p] * static_cast<double>(n);
            target[p] = static_cast<std::size_t>(exact[p]);
            assigned += target[p];
        }
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
        });
        for (std::size_t i = 0; assigned < n; ++i, ++assigned) target[order[i % 3]]++;
    }
    for (std::size_t t : target)
        if (t == 0) throw std::invalid_argument("split: empty split part");

    // shuffle each label class separately, then deal proportionally
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    Rng rng(seed);
    auto shuffle = [&](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.next_below(i)]);
    };
    shuffle(pos);
    shuffle(neg);

    std::array<std::vector<std::size_t>, 3> parts;
    std::array<std::size_t, 3> remaining = target;
    auto deal = [&](const std::vector<std::size_t>& cls) {
        // per-class largest-remainder allocation against the remaining capacity
        const std::size_t m = cls.size();
        std::size_t cap = remaining[0] + remaining[1] + remaining[2];
        std::array<std::size_t, 3> take{};
        std::array<double, 3> exact{};
        std::size_t assigned = 0;
        for (int p = 0; p < 3; ++p) {
            exact[p] = cap == 0 ? 0.0
                                : static_cast<double>(m) * static_cast<double>(remaining[p]) /
                                      static_cast<double>(cap);
            take[p] = std::min(remaining[p], static_cast<std::size_t>(exact[p]));
            assigned += take[p];
        }
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
        });
        for (std::size_t i = 0; assigned < m; ++i) {
            int p = order[i % 3];
            if (take[p] < remaining[p]) {
                take[p]++;
                assigned++;
            }
        }
        std::size_t cursor = 0;
        for (int p = 0; p < 3; ++p) {
            for (std::size_t i = 0; i < take[p]; ++i) parts[p].push_back(cls[cursor++]);
            remaining[p] -= take[p];
        }
    };
    deal(pos);
    deal(neg);
    for (auto& part : parts) std::sort(part.begin(), part.end());
    for (const auto& part : parts)
        if (part.empty()) throw std::invalid_argument("split: empty split part");
    return parts;
}

Split split_dataset(const Dataset& d, SplitFractions fractions, std::uint64_t seed) {
    auto parts = split_indices(d.labels, fractions, seed);
    Split s;
    s.train = d.select_rows(parts[0]);
    s.validation = d.select_rows(parts[1]);
    s.test = d.select_rows(parts[2]);
    s.seed = seed;
    return s;
}

}  // namespace fairmask
