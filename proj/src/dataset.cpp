#include "calex/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "calex/error.hpp"
#include "calex/kernels.hpp"
#include "calex/rng.hpp"

namespace calex {

const char* feature_kind_name(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::numeric: return "numeric";
        case FeatureKind::binary: return "binary";
        case FeatureKind::ordinal: return "ordinal";
    }
    return "numeric";
}

const char* feature_group_name(FeatureGroup group) {
    switch (group) {
        case FeatureGroup::demographic: return "demographic";
        case FeatureGroup::physical: return "physical";
        case FeatureGroup::aggregated: return "aggregated";
        case FeatureGroup::behavioural: return "behavioural";
    }
    return "aggregated";
}

FeatureKind parse_feature_kind(const std::string& s) {
    if (s == "numeric") return FeatureKind::numeric;
    if (s == "binary") return FeatureKind::binary;
    if (s == "ordinal") return FeatureKind::ordinal;
    throw Error(ErrorKind::ConfigError, "unknown feature kind '" + s + "'");
}

FeatureGroup parse_feature_group(const std::string& s) {
    if (s == "demographic") return FeatureGroup::demographic;
    if (s == "physical") return FeatureGroup::physical;
    if (s == "aggregated") return FeatureGroup::aggregated;
    if (s == "behavioural") return FeatureGroup::behavioural;
    throw Error(ErrorKind::ConfigError, "unknown feature group '" + s + "'");
}

bool FeatureSchema::admits(double value) const {
    if (!std::isfinite(value)) return false;
    if (kind == FeatureKind::binary) return value == 0.0 || value == 1.0;
    return value >= lo && value <= hi;
}

DataTable::DataTable(std::vector<FeatureSchema> schema, std::vector<double> rows,
                     std::vector<int> target, std::vector<std::string> row_ids)
    : schema_(std::move(schema)),
      rows_(std::move(rows)),
      target_(std::move(target)),
      row_ids_(std::move(row_ids)) {
    const std::size_t p = schema_.size();
    const std::size_t n = target_.size();
    if (row_ids_.empty()) {
        row_ids_.resize(n);
        for (std::size_t i = 0; i < n; ++i) row_ids_[i] = "r" + std::to_string(i);
    }
    if (rows_.size() != n * p || row_ids_.size() != n)
        throw Error(ErrorKind::WidthMismatch, "row/target/id shapes disagree");
    std::unordered_set<std::string> names;
    for (const auto& f : schema_) {
        if (!names.insert(f.name).second)
            throw Error(ErrorKind::SchemaViolation, "duplicate feature name '" + f.name + "'");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (target_[i] != 0 && target_[i] != 1)
            throw Error(ErrorKind::SchemaViolation,
                        "target at row " + std::to_string(i) + " is not in {0,1}");
        for (std::size_t j = 0; j < p; ++j) {
            const double v = rows_[i * p + j];
            if (!schema_[j].admits(v))
                throw Error(ErrorKind::SchemaViolation,
                            "row " + std::to_string(i) + ", feature '" + schema_[j].name +
                                "': value " + std::to_string(v) + " outside schema");
        }
    }
}

std::size_t DataTable::feature_index(const std::string& name) const {
    for (std::size_t j = 0; j < schema_.size(); ++j)
        if (schema_[j].name == name) return j;
    throw Error(ErrorKind::UnknownFeature, "'" + name + "'");
}

std::vector<double> DataTable::column(std::size_t j) const {
    std::vector<double> col(n());
    for (std::size_t i = 0; i < n(); ++i) col[i] = at(i, j);
    return col;
}

DataTable DataTable::take(std::span<const std::size_t> indices) const {
    std::vector<double> rows;
    rows.reserve(indices.size() * p());
    std::vector<int> target;
    target.reserve(indices.size());
    std::vector<std::string> ids;
    ids.reserve(indices.size());
    for (std::size_t i : indices) {
        auto r = row(i);
        rows.insert(rows.end(), r.begin(), r.end());
        target.push_back(target_[i]);
        ids.push_back(row_ids_[i]);
    }
    return DataTable(schema_, std::move(rows), std::move(target), std::move(ids));
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

DataTable load_csv(const std::string& path, const std::vector<FeatureSchema>& schema,
                   MissingPolicy policy) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MissingFile, path);

    std::string header;
    if (!std::getline(in, header)) throw Error(ErrorKind::EmptyFile, path);
    const auto header_cells = split_line(header);

    std::unordered_map<std::string, std::size_t> col_of;
    for (std::size_t c = 0; c < header_cells.size(); ++c)
        col_of[trim(header_cells[c])] = c;

    const std::size_t p = schema.size();
    std::vector<std::size_t> feature_col(p);
    for (std::size_t j = 0; j < p; ++j) {
        auto it = col_of.find(schema[j].name);
        if (it == col_of.end()) throw Error(ErrorKind::MissingColumn, schema[j].name);
        feature_col[j] = it->second;
    }
    auto target_it = col_of.find("target");
    if (target_it == col_of.end()) throw Error(ErrorKind::MissingColumn, "target");
    const std::size_t target_col = target_it->second;

    std::vector<double> rows;
    std::vector<int> target;
    // (row, feature) positions awaiting imputation
    std::vector<std::pair<std::size_t, std::size_t>> holes;

    std::string line;
    std::size_t file_row = 0;
    while (std::getline(in, line)) {
        ++file_row;  // 1-based data row for error reports
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);

        auto cell_at = [&](std::size_t c) -> std::string {
            return c < cells.size() ? trim(cells[c]) : std::string();
        };

        const std::string tcell = cell_at(target_col);
        double tval;
        if (tcell.empty() || !parse_double(tcell, tval) || (tval != 0.0 && tval != 1.0))
            throw Error(ErrorKind::ParseError,
                        "row " + std::to_string(file_row) + ", column 'target': '" + tcell + "'");
        target.push_back(static_cast<int>(tval));

        for (std::size_t j = 0; j < p; ++j) {
            const std::string cell = cell_at(feature_col[j]);
            if (cell.empty()) {
                if (policy == MissingPolicy::fail_fast)
                    throw Error(ErrorKind::ParseError, "row " + std::to_string(file_row) +
                                                           ", column '" + schema[j].name +
                                                           "': missing cell");
                holes.emplace_back(target.size() - 1, j);
                rows.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            double v;
            if (!parse_double(cell, v))
                throw Error(ErrorKind::ParseError, "row " + std::to_string(file_row) +
                                                       ", column '" + schema[j].name + "': '" +
                                                       cell + "'");
            if (!schema[j].admits(v))
                throw Error(ErrorKind::SchemaViolation, "row " + std::to_string(file_row) +
                                                            ", column '" + schema[j].name +
                                                            "': value " + cell);
            rows.push_back(v);
        }
    }
    if (target.empty()) throw Error(ErrorKind::EmptyFile, path);

    if (!holes.empty()) {
        const std::size_t n = target.size();
        std::vector<double> mean(p, 0.0);
        std::vector<std::size_t> cnt(p, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double v = rows[i * p + j];
                if (!std::isnan(v)) {
                    mean[j] += v;
                    ++cnt[j];
                }
            }
        for (auto [i, j] : holes) {
            if (cnt[j] == 0)
                throw Error(ErrorKind::ParseError,
                            "column '" + schema[j].name + "' has no complete cells to impute from");
            double v = mean[j] / static_cast<double>(cnt[j]);
            // binary columns take the majority level so {0,1} stays intact
            if (schema[j].kind == FeatureKind::binary) v = v >= 0.5 ? 1.0 : 0.0;
            rows[i * p + j] = v;
        }
    }

    return DataTable(schema, std::move(rows), std::move(target), {});
}

namespace {

std::pair<DataTable, DataTable> partition_by_indices(const DataTable& table,
                                                     std::vector<std::size_t> first_idx,
                                                     std::vector<std::size_t> second_idx) {
    std::sort(first_idx.begin(), first_idx.end());
    std::sort(second_idx.begin(), second_idx.end());
    return {table.take(first_idx), table.take(second_idx)};
}

}  // namespace

std::pair<DataTable, DataTable> split(const DataTable& table, double train_fraction,
                                      std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorKind::BadFraction, std::to_string(train_fraction));
    if (table.n() < 2) throw Error(ErrorKind::EmptyTable, "need at least 2 rows to split");

    const std::size_t n = table.n();
    const std::size_t k =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));

    Rng rng(seed);
    auto perm = rng.permutation(n);
    std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + k);
    std::vector<std::size_t> test_idx(perm.begin() + k, perm.end());
    return partition_by_indices(table, std::move(train_idx), std::move(test_idx));
}

std::pair<DataTable, DataTable> hold_out(const DataTable& table, std::size_t count,
                                         std::uint64_t seed) {
    if (count == 0 || count >= table.n())
        throw Error(ErrorKind::BadCount,
                    std::to_string(count) + " of " + std::to_string(table.n()) + " rows");

    Rng rng(seed);
    auto perm = rng.permutation(table.n());
    std::vector<std::size_t> held_idx(perm.begin(), perm.begin() + count);
    std::vector<std::size_t> rest_idx(perm.begin() + count, perm.end());
    return partition_by_indices(table, std::move(rest_idx), std::move(held_idx));
}

CohortSummary summarize(const DataTable& table) {
    if (table.n() == 0) throw Error(ErrorKind::EmptyTable, "summarize");

    CohortSummary summary;
    for (int cls : table.target()) ++summary.class_n[cls];

    const std::size_t p = table.p();
    summary.features.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        auto& fs = summary.features[j];
        fs.name = table.schema()[j].name;
        fs.kind = table.schema()[j].kind;
        double s1[2] = {0, 0}, s2[2] = {0, 0};
        std::int64_t cnt1[2] = {0, 0};
        for (std::size_t i = 0; i < table.n(); ++i) {
            const int cls = table.target()[i];
            const double v = table.at(i, j);
            s1[cls] += v;
            s2[cls] += v * v;
            if (v == 1.0) ++cnt1[cls];
        }
        for (int cls = 0; cls < 2; ++cls) {
            const auto nc = summary.class_n[cls];
            if (nc == 0) continue;
            const double nd = static_cast<double>(nc);
            const double mean = s1[cls] / nd;
            fs.by_class[cls].mean = mean;
            fs.by_class[cls].sd = std::sqrt(std::max(0.0, s2[cls] / nd - mean * mean));
            fs.by_class[cls].prevalence = static_cast<double>(cnt1[cls]) / nd;
            fs.by_class[cls].count = cnt1[cls];
        }
    }
    return summary;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

DataTable synthesize(const SyntheticSpec& spec) {
    const std::size_t p = spec.schema.size();
    if (spec.n <= 0 || p == 0 || spec.marginals.size() != p || spec.beta.size() != p)
        throw Error(ErrorKind::BadSpec, "shape mismatch in synthetic spec");
    for (std::size_t j = 0; j < p; ++j) {
        const auto& m = spec.marginals[j];
        if (spec.schema[j].kind == FeatureKind::binary) {
            if (!(m.p >= 0.0 && m.p <= 1.0))
                throw Error(ErrorKind::BadSpec, "Bernoulli p outside [0,1] for '" +
                                                    spec.schema[j].name + "'");
        } else if (!(m.sd >= 0.0)) {
            throw Error(ErrorKind::BadSpec, "negative sd for '" + spec.schema[j].name + "'");
        }
    }

    Rng rng(spec.seed);
    const std::size_t n = static_cast<std::size_t>(spec.n);
    std::vector<double> rows(n * p);
    std::vector<int> target(n);
    std::vector<std::string> ids(n);
    char buf[24];
    for (std::size_t i = 0; i < n; ++i) {
        double* row = rows.data() + i * p;
        for (std::size_t j = 0; j < p; ++j) {
            const auto& f = spec.schema[j];
            const auto& m = spec.marginals[j];
            if (f.kind == FeatureKind::binary) {
                row[j] = rng.bernoulli(m.p) ? 1.0 : 0.0;
            } else {
                row[j] = std::clamp(rng.normal(m.mean, m.sd), f.lo, f.hi);
            }
        }
        const double eta = spec.beta0 + kernels::dot(row, spec.beta.data(), p);
        target[i] = rng.bernoulli(sigmoid(eta)) ? 1 : 0;
        std::snprintf(buf, sizeof buf, "s%06zu", i);
        ids[i] = buf;
    }
    return DataTable(spec.schema, std::move(rows), std::move(target), std::move(ids));
}

namespace {

struct NamedMarginal {
    const char* name;
    FeatureKind kind;
    double lo, hi;
    FeatureGroup group;
    Marginal marginal;
    double beta;
};

// Named features with marginals pooled from the published cohort table;
// coefficient sizes tuned on the demo generator for ~0.7 CV AUC.
const NamedMarginal kNamedFeatures[] = {
    {"Age", FeatureKind::numeric, 50.0, 105.0, FeatureGroup::demographic,
     {65.0, 9.2, 0}, 0.005},
    {"Female", FeatureKind::binary, 0.0, 1.0, FeatureGroup::demographic,
     {0, 0, 0.452}, 0.15},
    {"LongTermIllness", FeatureKind::binary, 0.0, 1.0, FeatureGroup::physical,
     {0, 0, 0.5}, 0.20},
    {"HighBloodPressure", FeatureKind::binary, 0.0, 1.0, FeatureGroup::physical,
     {0, 0, 0.318}, 0.30},
    {"HighCholesterol", FeatureKind::binary, 0.0, 1.0, FeatureGroup::physical,
     {0, 0, 0.213}, 0.20},
    {"SelfPerceivedHealth2", FeatureKind::binary, 0.0, 1.0, FeatureGroup::physical,
     {0, 0, 0.663}, 0.35},
    {"BMI", FeatureKind::numeric, 12.0, 70.0, FeatureGroup::aggregated,
     {26.3, 4.1, 0}, 0.09},
    {"Orientation", FeatureKind::ordinal, 0.0, 4.0, FeatureGroup::aggregated,
     {3.9, 0.4, 0}, -0.10},
    {"MathSkills", FeatureKind::ordinal, 1.0, 5.0, FeatureGroup::aggregated,
     {3.5, 1.1, 0}, -0.05},
    {"QualityOfLife", FeatureKind::numeric, 12.0, 48.0, FeatureGroup::aggregated,
     {37.8, 5.8, 0}, -0.03},
    {"Guilt", FeatureKind::binary, 0.0, 1.0, FeatureGroup::aggregated,
     {0, 0, 0.074}, 0.05},
    {"EverSmokedDaily", FeatureKind::binary, 0.0, 1.0, FeatureGroup::behavioural,
     {0, 0, 0.478}, 0.10},
    {"AlcoholConsumption", FeatureKind::ordinal, 1.0, 7.0, FeatureGroup::behavioural,
     {4.2, 2.2, 0}, 0.06},
    {"Sport", FeatureKind::ordinal, 1.0, 4.0, FeatureGroup::behavioural,
     {2.4, 1.3, 0}, 0.12},
};

// group -> (total feature count in the layout, filler name prefix)
struct GroupPlan {
    FeatureGroup group;
    std::size_t total;
    const char* prefix;
};
const GroupPlan kGroupPlan[] = {
    {FeatureGroup::demographic, 2, "Demographic"},
    {FeatureGroup::physical, 15, "Physical"},
    {FeatureGroup::aggregated, 31, "Aggregated"},
    {FeatureGroup::behavioural, 5, "Behavioural"},
};

}  // namespace

std::vector<FeatureSchema> default_schema() {
    std::vector<FeatureSchema> schema;
    for (const auto& plan : kGroupPlan) {
        std::size_t emitted = 0;
        for (const auto& nf : kNamedFeatures) {
            if (nf.group != plan.group) continue;
            schema.push_back({nf.name, nf.kind, nf.lo, nf.hi, nf.group});
            ++emitted;
        }
        char buf[32];
        for (std::size_t k = emitted; k < plan.total; ++k) {
            std::snprintf(buf, sizeof buf, "%s%02zu", plan.prefix, k - emitted + 1);
            schema.push_back({buf, FeatureKind::numeric,
                              -std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity(), plan.group});
        }
    }
    return schema;
}

SyntheticSpec default_synthetic_spec(std::int64_t n, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.schema = default_schema();
    const std::size_t p = spec.schema.size();
    spec.marginals.resize(p);
    spec.beta.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        bool named = false;
        for (const auto& nf : kNamedFeatures) {
            if (spec.schema[j].name == nf.name) {
                spec.marginals[j] = nf.marginal;
                spec.beta[j] = nf.beta;
                named = true;
                break;
            }
        }
        if (!named) spec.marginals[j] = {0.0, 1.0, 0.5};  // standard-normal filler
    }
    // Centering so the prevalence stays near 8.3% under the betas above.
    spec.beta0 = -5.93;
    spec.n = n;
    spec.seed = seed;
    return spec;
}

std::vector<double> use_case_patient(const std::vector<FeatureSchema>& schema,
                                     std::span<const double> fallback_means) {
    if (fallback_means.size() != schema.size())
        throw Error(ErrorKind::WidthMismatch, "fallback means width");

    struct Pin {
        const char* name;
        double value;
    };
    static const Pin kPins[] = {
        {"Age", 59.0},          {"Female", 0.0},
        {"BMI", 28.04},         {"HighBloodPressure", 1.0},
        {"HighCholesterol", 0.0}, {"AlcoholConsumption", 7.0},
        {"LongTermIllness", 1.0}, {"Sport", 4.0},
        {"MathSkills", 5.0},    {"Orientation", 3.0},
        {"QualityOfLife", 47.0}, {"SelfPerceivedHealth2", 1.0},
    };

    std::vector<double> row(fallback_means.begin(), fallback_means.end());
    for (const auto& pin : kPins) {
        for (std::size_t j = 0; j < schema.size(); ++j) {
            if (schema[j].name == pin.name) {
                row[j] = pin.value;
                break;
            }
        }
    }
    return row;
}

std::vector<double> use_case_patient() {
    auto spec = default_synthetic_spec(1, 0);
    std::vector<double> means(spec.schema.size());
    for (std::size_t j = 0; j < spec.schema.size(); ++j)
        means[j] = spec.schema[j].kind == FeatureKind::binary ? spec.marginals[j].p
                                                              : spec.marginals[j].mean;
    return use_case_patient(spec.schema, means);
}

}  // namespace calex
