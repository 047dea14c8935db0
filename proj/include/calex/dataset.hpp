#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace calex {

enum class FeatureKind { numeric, binary, ordinal };
enum class FeatureGroup { demographic, physical, aggregated, behavioural };

const char* feature_kind_name(FeatureKind kind);
const char* feature_group_name(FeatureGroup group);
FeatureKind parse_feature_kind(const std::string& s);
FeatureGroup parse_feature_group(const std::string& s);

struct FeatureSchema {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    FeatureGroup group = FeatureGroup::aggregated;

    bool admits(double value) const;
};

// Immutable feature matrix + binary target. Rows are stored row-major;
// construction validates schema bounds and name uniqueness, after which the
// table is safe to share across threads.
class DataTable {
public:
    DataTable() = default;
    DataTable(std::vector<FeatureSchema> schema, std::vector<double> rows,
              std::vector<int> target, std::vector<std::string> row_ids);

    std::size_t n() const { return target_.size(); }
    std::size_t p() const { return schema_.size(); }

    const std::vector<FeatureSchema>& schema() const { return schema_; }
    const std::vector<int>& target() const { return target_; }
    const std::vector<std::string>& row_ids() const { return row_ids_; }
    const std::vector<double>& data() const { return rows_; }

    std::span<const double> row(std::size_t i) const {
        return {rows_.data() + i * p(), p()};
    }
    double at(std::size_t i, std::size_t j) const { return rows_[i * p() + j]; }

    // Index of a named feature; throws Error(UnknownFeature) if absent.
    std::size_t feature_index(const std::string& name) const;

    std::vector<double> column(std::size_t j) const;

    // Subset by row indices, preserving the given order.
    DataTable take(std::span<const std::size_t> indices) const;

private:
    std::vector<FeatureSchema> schema_;
    std::vector<double> rows_;
    std::vector<int> target_;
    std::vector<std::string> row_ids_;
};

struct FeatureClassStats {
    // numeric/ordinal: mean + population sd; binary: prevalence + count
    double mean = 0.0;
    double sd = 0.0;
    double prevalence = 0.0;
    std::int64_t count = 0;
};

struct FeatureSummary {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    FeatureClassStats by_class[2];  // indexed by target value
};

struct CohortSummary {
    std::int64_t class_n[2] = {0, 0};
    std::vector<FeatureSummary> features;
};

struct Marginal {
    // normal(mean, sd) clipped to schema bounds for numeric/ordinal,
    // Bernoulli(p) for binary
    double mean = 0.0;
    double sd = 1.0;
    double p = 0.5;
};

struct SyntheticSpec {
    std::vector<FeatureSchema> schema;
    std::vector<Marginal> marginals;
    std::vector<double> beta;  // ground-truth logit-scale coefficients
    double beta0 = 0.0;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
};

enum class MissingPolicy { fail_fast, mean_impute };

DataTable load_csv(const std::string& path,
                   const std::vector<FeatureSchema>& schema,
                   MissingPolicy policy = MissingPolicy::fail_fast);

// Seeded random row partition; train side receives round(train_fraction * n)
// rows. Both sides keep the input row order.
std::pair<DataTable, DataTable> split(const DataTable& table,
                                      double train_fraction,
                                      std::uint64_t seed);

// Seeded draw of exactly `count` rows into the second table.
std::pair<DataTable, DataTable> hold_out(const DataTable& table,
                                         std::size_t count,
                                         std::uint64_t seed);

CohortSummary summarize(const DataTable& table);

DataTable synthesize(const SyntheticSpec& spec);

// The 53-feature screening layout: 2 demographic, 15 physical health,
// 31 aggregated health, 5 behavioural features.
std::vector<FeatureSchema> default_schema();

// Demo generator: named-feature marginals from the published cohort summary,
// filler features standard normal, coefficients sized for a weakly
// discriminating model (~0.7 cross-validated AUC) at ~8.3% prevalence.
SyntheticSpec default_synthetic_spec(std::int64_t n, std::uint64_t seed);

// The case-study patient: twelve pinned feature values, everything else
// filled from `fallback_means` (typically training means).
std::vector<double> use_case_patient(const std::vector<FeatureSchema>& schema,
                                     std::span<const double> fallback_means);

// Convenience overload on the default schema with its marginal means.
std::vector<double> use_case_patient();

}  // namespace calex
