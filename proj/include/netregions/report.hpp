#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netregions/similarity.hpp"

namespace netregions {

/// One period's side of the comparison. Spatial fields are NaN until a
/// shape report is folded in; has_spatial records whether they mean anything.
struct PeriodReport {
    std::string label;
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double total_weight = 0.0;
    int region_count = 0;
    double modularity = 0.0;

    bool has_spatial = false;
    double mean_compactness = 0.0;
    double median_compactness = 0.0;
    double avg_border_per_region = 0.0;
    std::vector<std::string> warnings;
};

/// Cross-period section: the five similarity indices plus the node sets the
/// known-node restriction dropped on each side.
struct CrossPeriodReport {
    SimilarityResult similarity;
    std::vector<std::string> dropped_pre;
    std::vector<std::string> dropped_post;
};

/// Everything needed to replay the run. generated_at is the only field that
/// changes between identical runs.
struct RunMetadata {
    std::string network;
    std::uint64_t seed = 0;
    int restarts = 0;
    double resolution = 1.0;
    std::string node_order;
    std::string nmi_variant;
    std::string software_version;
    std::string generated_at;
};

struct ComparisonReport {
    PeriodReport pre;
    PeriodReport post;
    CrossPeriodReport cross;
    RunMetadata meta;
};

/// Serializes the report as pretty-printed JSON (schema_version included).
/// Degenerate z-Rand appears as null alongside the z_rand_degenerate flag.
std::string report_json(const ComparisonReport& report);
void save_report_json(const ComparisonReport& report, const std::string& path);

/// Flat one-row CSV: network, period labels, node/community counts, then the
/// indices. A degenerate z-Rand leaves its field empty.
std::string report_csv(const ComparisonReport& report);
void save_report_csv(const ComparisonReport& report, const std::string& path);

/// ISO 8601 UTC timestamp for RunMetadata::generated_at.
std::string current_timestamp_utc();

}  // namespace netregions
