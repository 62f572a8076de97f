#include "netregions/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <optional>

#include <json.hpp>

#include "netregions/geojson.hpp"
#include "netregions/geometry.hpp"
#include "netregions/shape_metrics.hpp"
#include "netregions/version.hpp"

namespace netregions {

namespace fs = std::filesystem;

namespace {

/// Reruns module errors with the pipeline stage prepended, preserving the
/// error class so exit codes stay correct.
template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
    try {
        return std::forward<F>(f)();
    } catch (const ValidationError& e) {
        throw ValidationError(name + ": " + e.what());
    } catch (const ComputationError& e) {
        throw ComputationError(name + ": " + e.what());
    }
}

void check_keys(const nlohmann::json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (item.key() == a) known = true;
        if (!known)
            throw ValidationError("config: unknown key '" + item.key() + "' in " + section);
    }
}

std::string resolve(const fs::path& dir, const std::string& value) {
    if (value.empty()) return value;
    fs::path p(value);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (dir / p).lexically_normal().string();
}

PeriodInputConfig parse_period(const nlohmann::json& j, const fs::path& dir,
                               const std::string& default_label) {
    check_keys(j, "periods." + default_label,
               {"label", "edges", "origin_column", "destination_column", "weight_column",
                "delimiter", "symmetrize", "aggregate_prefix", "crosswalk"});
    PeriodInputConfig p;
    p.label = j.value("label", default_label);
    if (!j.contains("edges"))
        throw ValidationError("config: periods." + default_label + ".edges is required");
    p.edges_path = resolve(dir, j.at("edges").get<std::string>());
    p.ingest.origin_col = j.value("origin_column", p.ingest.origin_col);
    p.ingest.dest_col = j.value("destination_column", p.ingest.dest_col);
    p.ingest.weight_col = j.value("weight_column", p.ingest.weight_col);
    if (j.contains("delimiter")) {
        const std::string d = j.at("delimiter").get<std::string>();
        if (d.size() != 1)
            throw ValidationError("config: delimiter must be a single character, got '" + d + "'");
        p.ingest.delimiter = d[0];
    }
    if (j.contains("symmetrize"))
        p.ingest.symmetrize = symmetrize_from_string(j.at("symmetrize").get<std::string>());
    p.aggregate_prefix = j.value("aggregate_prefix", std::size_t{0});
    if (j.contains("crosswalk")) p.crosswalk_path = resolve(dir, j.at("crosswalk").get<std::string>());
    return p;
}

PipelineConfig parse_config(const nlohmann::json& doc, const fs::path& dir) {
    if (!doc.is_object()) throw ValidationError("config: top level must be a JSON object");
    check_keys(doc, "top level",
               {"schema_version", "network", "periods", "louvain", "similarity", "spatial",
                "output"});
    if (doc.contains("schema_version") && doc.at("schema_version") != kSchemaVersion)
        throw ValidationError("config: unsupported schema_version " + doc.at("schema_version").dump());

    PipelineConfig cfg;
    cfg.network = doc.value("network", cfg.network);

    if (!doc.contains("periods")) throw ValidationError("config: 'periods' section is required");
    const auto& periods = doc.at("periods");
    check_keys(periods, "periods", {"pre", "post"});
    if (!periods.contains("pre") || !periods.contains("post"))
        throw ValidationError("config: periods must contain exactly 'pre' and 'post'");
    cfg.pre = parse_period(periods.at("pre"), dir, "pre");
    cfg.post = parse_period(periods.at("post"), dir, "post");

    if (doc.contains("louvain")) {
        const auto& l = doc.at("louvain");
        check_keys(l, "louvain", {"seed", "restarts", "resolution", "min_gain", "node_order",
                                  "threads"});
        cfg.louvain.seed = l.value("seed", cfg.louvain.seed);
        cfg.louvain.restarts = l.value("restarts", cfg.louvain.restarts);
        cfg.louvain.resolution = l.value("resolution", cfg.louvain.resolution);
        cfg.louvain.min_gain = l.value("min_gain", cfg.louvain.min_gain);
        if (l.contains("node_order"))
            cfg.louvain.node_order = node_order_from_string(l.at("node_order").get<std::string>());
        cfg.louvain.threads = l.value("threads", cfg.louvain.threads);
    }
    if (doc.contains("similarity")) {
        const auto& s = doc.at("similarity");
        check_keys(s, "similarity", {"nmi_variant"});
        if (s.contains("nmi_variant"))
            cfg.nmi_variant = nmi_variant_from_string(s.at("nmi_variant").get<std::string>());
    }
    if (doc.contains("spatial")) {
        const auto& s = doc.at("spatial");
        check_keys(s, "spatial",
                   {"geometry", "id_property", "snap_tolerance", "adjacency", "unit_metrics"});
        if (s.contains("geometry")) cfg.spatial.geometry_path = resolve(dir, s.at("geometry"));
        cfg.spatial.id_property = s.value("id_property", cfg.spatial.id_property);
        cfg.spatial.snap_tolerance = s.value("snap_tolerance", cfg.spatial.snap_tolerance);
        if (s.contains("adjacency")) cfg.spatial.adjacency_path = resolve(dir, s.at("adjacency"));
        if (s.contains("unit_metrics"))
            cfg.spatial.unit_metrics_path = resolve(dir, s.at("unit_metrics"));
    }
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        check_keys(o, "output", {"directory"});
        if (o.contains("directory")) cfg.output_dir = resolve(dir, o.at("directory"));
    }
    return cfg;
}

struct SpatialData {
    bool have_shapes = false;
    UnitShapeTable shapes;
    SharedBorderTable borders;
    std::vector<GeometryInput> features;  // kept for the GeoJSON export
    std::vector<std::string> warnings;
};

SpatialData load_spatial(const SpatialConfig& cfg, const std::vector<std::string>& units) {
    SpatialData d;
    if (!cfg.geometry_path.empty()) {
        auto geo = read_geojson_units(cfg.geometry_path, cfg.id_property);
        d.warnings = geo.warnings;
        for (auto& f : geo.features)
            if (std::binary_search(units.begin(), units.end(), f.unit))
                d.features.push_back(std::move(f));
        if (d.features.empty())
            throw ValidationError("no geometry features match the analyzed units");
        auto res = preprocess_geometry(d.features, {cfg.snap_tolerance});
        d.shapes = shape_table(res.units);
        d.borders = res.borders;
        d.warnings.insert(d.warnings.end(), res.warnings.begin(), res.warnings.end());
        d.have_shapes = true;
    } else {
        d.borders = load_border_csv(cfg.adjacency_path);
        if (!cfg.unit_metrics_path.empty()) {
            d.shapes = load_unit_metrics_csv(cfg.unit_metrics_path);
            d.have_shapes = true;
        }
    }
    return d;
}

void fill_spatial(PeriodReport& rep, const Partition& partition, const SpatialData& spatial) {
    if (spatial.have_shapes) {
        auto shape_rep = partition_shape_report(partition, spatial.shapes, spatial.borders);
        rep.mean_compactness = shape_rep.mean_compactness;
        rep.median_compactness = shape_rep.median_compactness;
        rep.avg_border_per_region = shape_rep.border.per_region;
        rep.warnings = shape_rep.warnings;
    } else {
        auto border = avg_border_length(partition, spatial.borders);
        rep.avg_border_per_region = border.per_region;
        rep.mean_compactness = std::numeric_limits<double>::quiet_NaN();
        rep.median_compactness = std::numeric_limits<double>::quiet_NaN();
        rep.warnings.push_back("unit metrics not supplied; compactness unavailable");
    }
    rep.has_spatial = true;
    rep.warnings.insert(rep.warnings.end(), spatial.warnings.begin(), spatial.warnings.end());
}

}  // namespace

void PipelineConfig::validate() const {
    auto check_period = [](const PeriodInputConfig& p, const char* name) {
        const std::string where = std::string("config: periods.") + name;
        if (p.edges_path.empty()) throw ValidationError(where + ".edges is required");
        if (p.label.empty()) throw ValidationError(where + ".label must be non-empty");
        if (p.aggregate_prefix > 0 && !p.crosswalk_path.empty())
            throw ValidationError(where + ": aggregate_prefix and crosswalk are mutually exclusive");
    };
    check_period(pre, "pre");
    check_period(post, "post");
    louvain.validate();
    if (!spatial.geometry_path.empty() && !spatial.adjacency_path.empty())
        throw ValidationError("config: spatial.geometry and spatial.adjacency are mutually exclusive");
    if (!spatial.unit_metrics_path.empty() && spatial.adjacency_path.empty())
        throw ValidationError("config: spatial.unit_metrics requires spatial.adjacency");
    if (!(spatial.snap_tolerance > 0))
        throw ValidationError("config: spatial.snap_tolerance must be positive");
    if (output_dir.empty()) throw ValidationError("config: output.directory must be non-empty");
}

PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config '" + path + "': invalid JSON: " + std::string(e.what()));
    }
    try {
        return parse_config(doc, fs::path(path).parent_path());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config '" + path + "': " + std::string(e.what()));
    }
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();

    auto load_period = [](const PeriodInputConfig& p, const char* name) {
        return stage(std::string("ingest ") + name, [&] {
            WeightedGraph g = ingest_edge_list_file(p.edges_path, p.ingest);
            if (p.aggregate_prefix > 0)
                g = aggregate(g, Crosswalk::prefix(p.aggregate_prefix));
            else if (!p.crosswalk_path.empty())
                g = aggregate(g, Crosswalk::load_csv(p.crosswalk_path));
            return g;
        });
    };
    const WeightedGraph pre_raw = load_period(config.pre, "pre");
    const WeightedGraph post_raw = load_period(config.post, "post");

    const RestrictResult common =
        stage("restrict", [&] { return restrict_to_common(pre_raw, post_raw); });

    // The two periods are independent; with multiple workers configured they
    // detect concurrently. louvain itself is deterministic for any thread
    // count, so this never changes the result.
    std::optional<LouvainResult> pre_detect, post_detect;
    if (config.louvain.threads > 1) {
        auto future = std::async(std::launch::async, [&] {
            return stage("detect pre", [&] { return louvain(common.first, config.louvain); });
        });
        post_detect = stage("detect post", [&] { return louvain(common.second, config.louvain); });
        pre_detect = future.get();
    } else {
        pre_detect = stage("detect pre", [&] { return louvain(common.first, config.louvain); });
        post_detect = stage("detect post", [&] { return louvain(common.second, config.louvain); });
    }

    const SimilarityResult sim = stage("compare", [&] {
        return compare_partitions(pre_detect->partition, post_detect->partition,
                                  config.nmi_variant);
    });

    std::optional<SpatialData> spatial;
    if (config.spatial.enabled())
        spatial = stage("spatial", [&] {
            return load_spatial(config.spatial, pre_detect->partition.nodes());
        });

    ComparisonReport report;
    auto fill_period = [&](PeriodReport& rep, const char* name, const std::string& label,
                           const WeightedGraph& g, const LouvainResult& detect) {
        rep.label = label;
        rep.n_nodes = g.node_count();
        rep.n_edges = g.edge_count();
        rep.total_weight = g.total_weight();
        rep.region_count = detect.partition.num_communities();
        rep.modularity = detect.quality;
        if (spatial)
            stage(std::string("spatial metrics ") + name,
                  [&] { fill_spatial(rep, detect.partition, *spatial); });
    };
    fill_period(report.pre, "pre", config.pre.label, common.first, *pre_detect);
    fill_period(report.post, "post", config.post.label, common.second, *post_detect);
    report.cross.similarity = sim;
    report.cross.dropped_pre = common.dropped_first;
    report.cross.dropped_post = common.dropped_second;
    report.meta = {config.network,
                   config.louvain.seed,
                   config.louvain.restarts,
                   config.louvain.resolution,
                   to_string(config.louvain.node_order),
                   to_string(config.nmi_variant),
                   kVersion,
                   current_timestamp_utc()};

    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec)
        throw ValidationError("cannot create output directory '" + config.output_dir +
                              "': " + ec.message());

    PipelineResult result{std::move(report), {}};
    auto emit = [&](const std::string& name, auto&& writer) {
        const std::string path = (fs::path(config.output_dir) / name).string();
        writer(path);
        result.artifacts.push_back(path);
    };
    try {
        emit("partition_pre.csv",
             [&](const std::string& p) { pre_detect->partition.save_csv(p); });
        emit("partition_post.csv",
             [&](const std::string& p) { post_detect->partition.save_csv(p); });
        emit("report.json", [&](const std::string& p) { save_report_json(result.report, p); });
        emit("report.csv", [&](const std::string& p) { save_report_csv(result.report, p); });
        if (spatial && !spatial->features.empty()) {
            emit("regions_pre.geojson", [&](const std::string& p) {
                write_regions_geojson(p, spatial->features, pre_detect->partition);
            });
            emit("regions_post.geojson", [&](const std::string& p) {
                write_regions_geojson(p, spatial->features, post_detect->partition);
            });
        }
    } catch (...) {
        std::error_code ignore;
        for (const auto& p : result.artifacts) fs::remove(p, ignore);
        throw;
    }
    return result;
}

}  // namespace netregions
