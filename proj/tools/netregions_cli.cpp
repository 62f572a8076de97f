#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netregions/geojson.hpp"
#include "netregions/geometry.hpp"
#include "netregions/louvain.hpp"
#include "netregions/pipeline.hpp"
#include "netregions/shape_metrics.hpp"
#include "netregions/similarity.hpp"
#include "netregions/version.hpp"

namespace {

using namespace netregions;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write to '" + path + "'");
    out << text;
}

struct DetectOptions {
    std::string input;
    std::string origin_col = "origin";
    std::string dest_col = "destination";
    std::string weight_col = "weight";
    std::string delimiter = ",";
    std::string symmetrize = "sum";
    std::size_t aggregate_prefix = 0;
    std::string crosswalk;
    std::uint64_t seed = 0;
    int restarts = 10;
    double resolution = 1.0;
    double min_gain = 1e-10;
    std::string order = "fixed";
    int threads = 1;
    std::string output;
    bool summary = false;
    std::string dump_graph;
};

void run_detect(const DetectOptions& opt) {
    if (opt.delimiter.size() != 1)
        throw ValidationError("--delimiter must be a single character, got '" + opt.delimiter +
                              "'");
    IngestOptions ingest{opt.origin_col, opt.dest_col, opt.weight_col, opt.delimiter[0],
                         symmetrize_from_string(opt.symmetrize)};
    WeightedGraph graph = ingest_edge_list_file(opt.input, ingest);
    if (opt.aggregate_prefix > 0)
        graph = aggregate(graph, Crosswalk::prefix(opt.aggregate_prefix));
    else if (!opt.crosswalk.empty())
        graph = aggregate(graph, Crosswalk::load_csv(opt.crosswalk));

    if (!opt.dump_graph.empty()) {
        std::ofstream out(opt.dump_graph);
        if (!out) throw ValidationError("cannot write to '" + opt.dump_graph + "'");
        graph.dump_edges(out);
    }

    LouvainConfig config{opt.resolution, opt.seed,
                         opt.restarts,  opt.min_gain,
                         node_order_from_string(opt.order), opt.threads};
    const LouvainResult result = louvain(graph, config);

    if (opt.summary && opt.output.empty())
        throw ValidationError("--summary needs --output for the partition file");
    if (opt.output.empty()) {
        std::ostringstream buf;
        result.partition.write_csv(buf);
        std::cout << buf.str();
    } else {
        result.partition.save_csv(opt.output);
    }

    if (opt.summary) {
        nlohmann::json levels = nlohmann::json::array();
        for (const auto& level : result.levels)
            levels.push_back({{"num_communities", level.num_communities},
                              {"quality", level.quality_recomputed}});
        nlohmann::json j{{"schema_version", kSchemaVersion},
                         {"n_nodes", graph.node_count()},
                         {"n_edges", graph.edge_count()},
                         {"total_weight", graph.total_weight()},
                         {"num_communities", result.partition.num_communities()},
                         {"modularity", result.quality},
                         {"resolution", config.resolution},
                         {"seed", config.seed},
                         {"restarts", config.restarts},
                         {"node_order", to_string(config.node_order)},
                         {"threads", config.threads},
                         {"best_restart", result.best_restart},
                         {"levels", levels},
                         {"software_version", kVersion}};
        std::cout << j.dump(2) << "\n";
    }
}

struct CompareOptions {
    std::string pre;
    std::string post;
    bool restrict_common = false;
    std::string nmi_variant = "sum";
    std::string output;
};

std::string preview(const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size() && i < 5; ++i) {
        if (i) s += ", ";
        s += ids[i];
    }
    if (ids.size() > 5) s += ", ...";
    return s;
}

void run_compare(const CompareOptions& opt) {
    Partition pre = Partition::load_csv(opt.pre);
    Partition post = Partition::load_csv(opt.post);

    std::vector<std::string> pre_only, post_only;
    if (!pre.same_node_set(post)) {
        std::set_difference(pre.nodes().begin(), pre.nodes().end(), post.nodes().begin(),
                            post.nodes().end(), std::back_inserter(pre_only));
        std::set_difference(post.nodes().begin(), post.nodes().end(), pre.nodes().begin(),
                            pre.nodes().end(), std::back_inserter(post_only));
        if (!opt.restrict_common)
            throw ValidationError(
                "partitions cover different node sets: " + std::to_string(pre_only.size()) +
                " only in pre (" + preview(pre_only) + "), " + std::to_string(post_only.size()) +
                " only in post (" + preview(post_only) + "); rerun with --restrict-common");
        std::vector<std::string> shared;
        std::set_intersection(pre.nodes().begin(), pre.nodes().end(), post.nodes().begin(),
                              post.nodes().end(), std::back_inserter(shared));
        if (shared.empty()) throw ValidationError("partitions share no nodes");
        pre = pre.restricted_to(shared);
        post = post.restricted_to(shared);
    }

    const SimilarityResult s = compare_partitions(pre, post, nmi_variant_from_string(opt.nmi_variant));
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"n_common_nodes", s.n},
                     {"k_pre", s.k_first},
                     {"k_post", s.k_second},
                     {"rand", s.rand},
                     {"adjusted_rand", s.adjusted_rand},
                     {"jaccard", s.jaccard},
                     {"nmi", s.nmi},
                     {"nmi_variant", to_string(s.nmi_variant)},
                     {"z_rand", s.z_rand},
                     {"identical", s.identical},
                     {"z_rand_degenerate", s.z_rand_degenerate},
                     {"notes", s.notes},
                     {"dropped_nodes",
                      {{"pre_only", pre_only}, {"post_only", post_only}}}};
    write_text(opt.output, j.dump(2) + "\n");
}

struct SpatialOptions {
    std::string partition;
    std::string geometry;
    std::string id_property = "unit_id";
    double snap = 1e-6;
    std::string adjacency;
    std::string unit_metrics;
    std::string write_adjacency;
    std::string write_unit_metrics;
    std::string export_geojson;
    std::string output;
};

void run_spatial(const SpatialOptions& opt) {
    const Partition partition = Partition::load_csv(opt.partition);

    UnitShapeTable shapes;
    SharedBorderTable borders;
    bool have_shapes = false;
    std::vector<GeometryInput> features;
    std::vector<std::string> warnings;

    if (!opt.geometry.empty()) {
        auto geo = read_geojson_units(opt.geometry, opt.id_property);
        warnings = geo.warnings;
        const auto& nodes = partition.nodes();
        for (auto& f : geo.features)
            if (std::binary_search(nodes.begin(), nodes.end(), f.unit))
                features.push_back(std::move(f));
        if (features.empty())
            throw ValidationError("no geometry features match the partition's units");
        auto res = preprocess_geometry(features, {opt.snap});
        shapes = shape_table(res.units);
        borders = res.borders;
        warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
        have_shapes = true;
        if (!opt.write_adjacency.empty()) save_border_csv(borders, opt.write_adjacency);
        if (!opt.write_unit_metrics.empty()) save_unit_metrics_csv(shapes, opt.write_unit_metrics);
        if (!opt.export_geojson.empty())
            write_regions_geojson(opt.export_geojson, features, partition);
    } else {
        borders = load_border_csv(opt.adjacency);
        if (!opt.unit_metrics.empty()) {
            shapes = load_unit_metrics_csv(opt.unit_metrics);
            have_shapes = true;
        }
    }

    nlohmann::json j{{"schema_version", kSchemaVersion}};
    if (have_shapes) {
        const RegionShapeReport report = partition_shape_report(partition, shapes, borders);
        nlohmann::json regions = nlohmann::json::array();
        for (const auto& r : report.regions)
            regions.push_back({{"region", r.region},
                               {"unit_count", r.unit_count},
                               {"area", r.area},
                               {"perimeter", r.perimeter},
                               {"compactness", r.compactness}});
        j["region_count"] = report.region_count;
        j["regions"] = regions;
        j["mean_compactness"] = report.mean_compactness;
        j["median_compactness"] = report.median_compactness;
        j["border"] = {{"total", report.border.total}, {"per_region", report.border.per_region}};
        warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
    } else {
        const BorderSummary border = avg_border_length(partition, borders);
        j["region_count"] = partition.num_communities();
        j["border"] = {{"total", border.total}, {"per_region", border.per_region}};
        warnings.push_back("unit metrics not supplied; compactness unavailable");
    }
    j["warnings"] = warnings;
    write_text(opt.output, j.dump(2) + "\n");
}

struct PipelineOptions {
    std::string config;
    std::string output_dir;
    std::string network;
    std::optional<std::uint64_t> seed;
    std::optional<int> restarts;
    std::optional<double> resolution;
    std::optional<int> threads;
    std::string nmi_variant;
};

void run_pipeline_cmd(const PipelineOptions& opt) {
    PipelineConfig config = load_pipeline_config(opt.config);
    if (!opt.output_dir.empty()) config.output_dir = opt.output_dir;
    if (!opt.network.empty()) config.network = opt.network;
    if (opt.seed) config.louvain.seed = *opt.seed;
    if (opt.restarts) config.louvain.restarts = *opt.restarts;
    if (opt.resolution) config.louvain.resolution = *opt.resolution;
    if (opt.threads) config.louvain.threads = *opt.threads;
    if (!opt.nmi_variant.empty()) config.nmi_variant = nmi_variant_from_string(opt.nmi_variant);

    const PipelineResult result = run_pipeline(config);
    const SimilarityResult& s = result.report.cross.similarity;
    std::cout << "network: " << result.report.meta.network << "\n"
              << "periods: " << result.report.pre.label << " (" << result.report.pre.region_count
              << " regions, Q=" << format_sig12(result.report.pre.modularity) << "), "
              << result.report.post.label << " (" << result.report.post.region_count
              << " regions, Q=" << format_sig12(result.report.post.modularity) << ")\n"
              << "adjusted_rand: " << format_sig12(s.adjusted_rand)
              << "  jaccard: " << format_sig12(s.jaccard) << "  nmi: " << format_sig12(s.nmi)
              << "  z_rand: "
              << (s.z_rand_degenerate ? std::string("degenerate") : format_sig12(s.z_rand))
              << "\n";
    for (const auto& artifact : result.artifacts) std::cout << "wrote " << artifact << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"region detection and two-period comparison for weighted interaction networks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    DetectOptions detect_opt;
    auto* detect = app.add_subcommand("detect", "detect regions in one network");
    detect->add_option("--input", detect_opt.input, "edge list CSV")
        ->required()
        ->check(CLI::ExistingFile);
    detect->add_option("--origin-column", detect_opt.origin_col, "origin column name");
    detect->add_option("--destination-column", detect_opt.dest_col, "destination column name");
    detect->add_option("--weight-column", detect_opt.weight_col, "weight column name");
    detect->add_option("--delimiter", detect_opt.delimiter, "field delimiter");
    detect->add_option("--symmetrize", detect_opt.symmetrize, "sum | mean | max");
    auto* prefix_opt = detect->add_option("--aggregate-prefix", detect_opt.aggregate_prefix,
                                          "coarsen by id prefix of this length");
    detect->add_option("--crosswalk", detect_opt.crosswalk, "coarsen via crosswalk CSV")
        ->check(CLI::ExistingFile)
        ->excludes(prefix_opt);
    detect->add_option("--seed", detect_opt.seed, "restart shuffle seed");
    detect->add_option("--restarts", detect_opt.restarts, "independent restarts");
    detect->add_option("--resolution", detect_opt.resolution, "resolution gamma");
    detect->add_option("--min-gain", detect_opt.min_gain, "local-moving gain threshold");
    detect->add_option("--order", detect_opt.order, "fixed | shuffled");
    detect->add_option("--threads", detect_opt.threads, "worker threads across restarts");
    detect->add_option("--output", detect_opt.output, "partition CSV path (default stdout)");
    detect->add_flag("--summary", detect_opt.summary, "print a JSON run summary to stdout");
    detect->add_option("--dump-graph", detect_opt.dump_graph,
                       "write the ingested graph's edge list");
    detect->callback([&] { run_detect(detect_opt); });

    CompareOptions compare_opt;
    auto* compare = app.add_subcommand("compare", "compare two partition CSVs");
    compare->add_option("--pre", compare_opt.pre, "first partition CSV")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--post", compare_opt.post, "second partition CSV")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_flag("--restrict-common", compare_opt.restrict_common,
                      "restrict both partitions to their shared nodes");
    compare->add_option("--nmi-variant", compare_opt.nmi_variant, "sum | max | sqrt");
    compare->add_option("--output", compare_opt.output, "report JSON path (default stdout)");
    compare->callback([&] { run_compare(compare_opt); });

    SpatialOptions spatial_opt;
    auto* spatial = app.add_subcommand("spatial", "shape metrics for a partition");
    spatial->add_option("--partition", spatial_opt.partition, "partition CSV")
        ->required()
        ->check(CLI::ExistingFile);
    auto* geometry_opt =
        spatial->add_option("--geometry", spatial_opt.geometry, "GeoJSON FeatureCollection")
            ->check(CLI::ExistingFile);
    spatial->add_option("--id-property", spatial_opt.id_property,
                        "feature property holding the unit id");
    spatial->add_option("--snap", spatial_opt.snap, "endpoint snap tolerance");
    auto* adjacency_opt =
        spatial->add_option("--adjacency", spatial_opt.adjacency, "precomputed border CSV")
            ->check(CLI::ExistingFile)
            ->excludes(geometry_opt);
    spatial->add_option("--unit-metrics", spatial_opt.unit_metrics,
                        "precomputed unit area/perimeter CSV")
        ->check(CLI::ExistingFile)
        ->needs(adjacency_opt);
    spatial->add_option("--write-adjacency", spatial_opt.write_adjacency,
                        "export the computed border CSV")
        ->needs(geometry_opt);
    spatial->add_option("--write-unit-metrics", spatial_opt.write_unit_metrics,
                        "export the computed unit metrics CSV")
        ->needs(geometry_opt);
    spatial->add_option("--export-geojson", spatial_opt.export_geojson,
                        "write region-labeled GeoJSON")
        ->needs(geometry_opt);
    spatial->add_option("--output", spatial_opt.output, "report JSON path (default stdout)");
    spatial->callback([&] {
        if (spatial_opt.geometry.empty() && spatial_opt.adjacency.empty())
            throw ValidationError("spatial needs --geometry or --adjacency");
        run_spatial(spatial_opt);
    });

    PipelineOptions pipeline_opt;
    auto* pipeline = app.add_subcommand("pipeline", "full two-period comparison run");
    pipeline->add_option("--config", pipeline_opt.config, "pipeline config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    pipeline->add_option("--output-dir", pipeline_opt.output_dir, "override output directory");
    pipeline->add_option("--network", pipeline_opt.network, "override network name");
    pipeline->add_option("--seed", pipeline_opt.seed, "override detection seed");
    pipeline->add_option("--restarts", pipeline_opt.restarts, "override restart count");
    pipeline->add_option("--resolution", pipeline_opt.resolution, "override resolution gamma");
    pipeline->add_option("--threads", pipeline_opt.threads, "override worker threads");
    pipeline->add_option("--nmi-variant", pipeline_opt.nmi_variant, "override NMI variant");
    pipeline->callback([&] { run_pipeline_cmd(pipeline_opt); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ComputationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
