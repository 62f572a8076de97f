#pragma once

#include <string>
#include <vector>

#include "netregions/graph.hpp"
#include "netregions/louvain.hpp"
#include "netregions/report.hpp"

namespace netregions {

/// One period's input: an edge-list file plus optional coarsening, either by
/// id prefix (FIPS-style) or through an explicit crosswalk table.
struct PeriodInputConfig {
    std::string label;
    std::string edges_path;
    IngestOptions ingest;
    std::size_t aggregate_prefix = 0;  // 0 disables prefix coarsening
    std::string crosswalk_path;        // empty disables table coarsening
};

/// Spatial inputs are optional; without them the report simply omits the
/// shape sections. Either a GeoJSON file or precomputed adjacency/metrics
/// CSVs can drive the spatial stage.
struct SpatialConfig {
    std::string geometry_path;
    std::string id_property = "unit_id";
    double snap_tolerance = 1e-6;
    std::string adjacency_path;
    std::string unit_metrics_path;

    bool enabled() const { return !geometry_path.empty() || !adjacency_path.empty(); }
};

struct PipelineConfig {
    std::string network = "network";
    PeriodInputConfig pre;
    PeriodInputConfig post;
    LouvainConfig louvain;
    NmiVariant nmi_variant = NmiVariant::Sum;
    SpatialConfig spatial;
    std::string output_dir = ".";

    void validate() const;
};

/// Parses a JSON config file. Relative paths inside the file resolve against
/// the file's own directory; unknown keys are rejected so typos fail loudly.
PipelineConfig load_pipeline_config(const std::string& path);

struct PipelineResult {
    ComparisonReport report;
    std::vector<std::string> artifacts;  // files written, in order
};

/// Full run: ingest both periods, coarsen, restrict to the common node set,
/// detect regions per period, compare the partitions, compute spatial
/// metrics when inputs are present, and write partition CSVs, the report
/// (JSON and flat CSV), and region GeoJSON into output_dir. Errors carry
/// their stage name; artifacts written before a failure are removed.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace netregions
