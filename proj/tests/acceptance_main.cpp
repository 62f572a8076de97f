// Acceptance gate: one line per criterion, [PASS] or [FAIL], with wall time.
// Every expected value comes from an independent oracle (exhaustive search,
// all-pairs counting, Monte Carlo permutation, boundary walk) or a closed
// form; nothing is copied from the implementation under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "netregions/contingency.hpp"
#include "netregions/geometry.hpp"
#include "netregions/louvain.hpp"
#include "netregions/pipeline.hpp"
#include "netregions/shape_metrics.hpp"
#include "netregions/similarity.hpp"
#include "oracles.hpp"

using namespace netregions;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Outcome fail(const std::string& detail) { return {false, detail}; }
Outcome pass(const std::string& detail = "") { return {true, detail}; }

int failures = 0;

void run_criterion(int num, const std::string& label, double budget_s,
                   const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = fail(std::string("unexpected exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.pass && budget_s > 0 && dt >= budget_s)
        out = fail("exceeded the " + std::to_string(static_cast<int>(budget_s)) +
                   " s time budget");
    if (!out.pass) ++failures;
    std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << num << ": " << label;
    std::cout.setf(std::ios::fixed);
    std::cout.precision(1);
    std::cout << " (" << dt << " s)";
    if (!out.detail.empty()) std::cout << ": " << out.detail;
    std::cout << "\n" << std::flush;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// --- criterion 1 -----------------------------------------------------------

Outcome louvain_desk_scale() {
    std::mt19937_64 rng(101);
    LouvainConfig cfg;
    cfg.node_order = NodeOrder::Shuffled;
    cfg.restarts = 6;
    cfg.seed = 9;

    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const auto g = oracles::random_graph(n, 0.5, 5, rng);
        const auto best = oracles::exhaustive_max_modularity(g, 1.0);
        const auto res = louvain(g, cfg);
        if (res.quality > best.q + 1e-9)
            return fail("trial " + std::to_string(trial) + ": louvain Q " +
                        std::to_string(res.quality) + " exceeds exhaustive max " +
                        std::to_string(best.q));
    }

    struct Fixture {
        const char* name;
        WeightedGraph g;
        double max_q;
    };
    const Fixture fixtures[] = {{"bridge", oracles::two_triangle_bridge(), 5.0 / 14.0},
                                {"two triangles", oracles::two_triangles(), 0.5},
                                {"K3", oracles::triangle(), 0.0}};
    for (const auto& fx : fixtures) {
        const auto best = oracles::exhaustive_max_modularity(fx.g, 1.0);
        if (!close(best.q, fx.max_q, 1e-12))
            return fail(std::string(fx.name) + ": exhaustive max " + std::to_string(best.q) +
                        " differs from the frozen value " + std::to_string(fx.max_q));
        const auto res = louvain(fx.g, cfg);
        if (!close(res.quality, fx.max_q, 1e-12))
            return fail(std::string(fx.name) + ": louvain Q " + std::to_string(res.quality) +
                        " misses the maximum " + std::to_string(fx.max_q));
    }
    return pass("200 random graphs bounded; maxima 5/14, 1/2, 0 attained");
}

// --- criterion 2 -----------------------------------------------------------

Outcome similarity_exactness() {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 197);
        const auto la = oracles::random_labels(n, 8, rng);
        const auto lb = oracles::random_labels(n, 8, rng);
        std::vector<std::string> nodes;
        nodes.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) nodes.push_back(oracles::node_name(i));
        const Partition pa(nodes, la), pb(nodes, lb);

        const auto table = ContingencyTable::from(pa, pb);
        const auto lib = PairCounts::from(table);
        const auto ref = oracles::count_pairs(pa.labels(), pb.labels());
        if (lib.n11 != ref.n11 || lib.n10 != ref.n10 || lib.n01 != ref.n01 ||
            lib.n00 != ref.n00)
            return fail("trial " + std::to_string(trial) + ": pair counts disagree");

        if (rand_index(table) != oracles::rand_alt(ref))
            return fail("trial " + std::to_string(trial) + ": rand differs");
        if (jaccard(table) != oracles::jaccard_alt(ref))
            return fail("trial " + std::to_string(trial) + ": jaccard differs");

        const double ari = adjusted_rand(table);
        const long double den =
            static_cast<long double>(ref.n11 + ref.n10) * (ref.n10 + ref.n00) +
            static_cast<long double>(ref.n11 + ref.n01) * (ref.n01 + ref.n00);
        if (den == 0.0L) {
            if (ari != 1.0) return fail("trial " + std::to_string(trial) + ": degenerate ari");
        } else {
            const double ref_ari = oracles::ari_alt(ref);
            if (!close(ari, ref_ari, 1e-12 * std::max(1.0, std::abs(ref_ari))))
                return fail("trial " + std::to_string(trial) + ": ari differs");
        }

        const double lib_nmi = nmi(table);
        const double ref_nmi = oracles::nmi_alt(pa.labels(), pb.labels());
        if (!close(lib_nmi, ref_nmi, 1e-12 * std::max(1.0, std::abs(ref_nmi))))
            return fail("trial " + std::to_string(trial) + ": nmi differs");

        const auto moments = z_rand_null_moments(table);
        if (moments.variance > 0) {
            const double z = z_rand(table);
            const double ref_z =
                (static_cast<double>(ref.n11) - moments.mean) / std::sqrt(moments.variance);
            if (!close(z, ref_z, 1e-9 * std::max(1.0, std::abs(ref_z))))
                return fail("trial " + std::to_string(trial) + ": z-rand differs");
        }
    }
    return pass("500 pairs, all five indices match the all-pairs oracle");
}

// --- criterion 3 -----------------------------------------------------------

Outcome z_rand_null_model() {
    std::mt19937_64 rng(303);
    const int n = 50;
    const std::size_t samples = 200000;

    auto nontrivial_labels = [&] {
        for (;;) {
            auto l = oracles::random_labels(n, 5, rng);
            if (*std::max_element(l.begin(), l.end()) > 0) return l;
        }
    };

    for (int fixture = 0; fixture < 20; ++fixture) {
        const auto la = nontrivial_labels();
        const auto lb = nontrivial_labels();
        std::vector<std::string> nodes;
        for (int i = 0; i < n; ++i) nodes.push_back(oracles::node_name(i));
        const Partition pa(nodes, la), pb(nodes, lb);
        const auto table = ContingencyTable::from(pa, pb);
        const auto analytic = z_rand_null_moments(table);
        const auto mc = oracles::mc_pair_agreement(pa.labels(), pb.labels(), samples, rng);

        if (!close(analytic.mean, mc.mean, 3.0 * mc.se_mean()))
            return fail("fixture " + std::to_string(fixture) + ": mean " +
                        std::to_string(analytic.mean) + " vs MC " + std::to_string(mc.mean) +
                        " (3 se = " + std::to_string(3.0 * mc.se_mean()) + ")");

        // Comparing sigma through the variance with its distribution-free se;
        // se(sd) = se(var) / (2 sd) by the delta method.
        const double sd_mc = std::sqrt(mc.variance);
        const double se_sd = mc.se_variance() / (2.0 * sd_mc);
        if (!close(std::sqrt(analytic.variance), sd_mc, 3.0 * se_sd))
            return fail("fixture " + std::to_string(fixture) + ": sd " +
                        std::to_string(std::sqrt(analytic.variance)) + " vs MC " +
                        std::to_string(sd_mc) + " (3 se = " + std::to_string(3.0 * se_sd) + ")");
    }

    // All-in-one on both sides leaves nothing to permute.
    std::vector<std::string> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(oracles::node_name(i));
    const Partition all_one(nodes, std::vector<int>(n, 0));
    try {
        z_rand(ContingencyTable::from(all_one, all_one));
        return fail("degenerate all-in-one case did not raise");
    } catch (const ComputationError&) {
    }
    return pass("20 fixtures within 3 se of 200k-sample Monte Carlo");
}

// --- criterion 4 -----------------------------------------------------------

Outcome ari_null_behavior() {
    std::mt19937_64 rng(404);
    const std::vector<int> sizes{40, 30, 20, 10};
    std::vector<int> base;
    for (std::size_t g = 0; g < sizes.size(); ++g)
        base.insert(base.end(), static_cast<std::size_t>(sizes[g]), static_cast<int>(g));
    std::vector<std::string> nodes;
    for (int i = 0; i < 100; ++i) nodes.push_back(oracles::node_name(i));
    const Partition px(nodes, base);

    double sum = 0.0;
    std::vector<int> shuffled = base;
    for (int trial = 0; trial < 2000; ++trial) {
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng() % i]);
        const Partition py(nodes, shuffled);
        sum += adjusted_rand(ContingencyTable::from(px, py));
    }
    const double mean = sum / 2000.0;
    if (mean < -0.02 || mean > 0.02)
        return fail("mean ARI " + std::to_string(mean) + " outside [-0.02, 0.02]");
    std::ostringstream detail;
    detail.setf(std::ios::fixed);
    detail.precision(5);
    detail << "mean ARI " << mean << " over 2000 relabelings";
    return pass(detail.str());
}

// --- criterion 5 -----------------------------------------------------------

Outcome spatial_analytics() {
    const double snap = 1.0 / 1024.0;

    {
        auto r = preprocess_geometry({oracles::grid_square("sq", 0, 0)}, {snap});
        const double pp = compactness({"sq"}, shape_table(r.units), r.borders);
        if (!close(pp, std::numbers::pi / 4.0, 1e-12))
            return fail("unit square compactness " + std::to_string(pp));
    }
    {
        std::vector<GeometryInput> cells;
        std::vector<std::string> names;
        for (int i = 0; i < 4; ++i) {
            cells.push_back(oracles::grid_square("c" + std::to_string(i), i, 0));
            names.push_back(cells.back().unit);
        }
        auto r = preprocess_geometry(cells, {snap});
        const auto shape = region_shape(names, shape_table(r.units), r.borders);
        if (shape.perimeter != 10.0)
            return fail("1x4 dissolved perimeter " + std::to_string(shape.perimeter));
        if (!close(shape.compactness, 16.0 * std::numbers::pi / 100.0, 1e-12))
            return fail("1x4 compactness " + std::to_string(shape.compactness));
    }
    {
        GeometryInput gon;
        gon.unit = "gon";
        Ring ring;
        for (int i = 0; i <= 64; ++i) {
            const double a = 2.0 * std::numbers::pi * i / 64;
            ring.points.push_back(Point{std::cos(a), std::sin(a)});
        }
        gon.rings.push_back(ring);
        auto r = preprocess_geometry({gon}, {});
        const double pp = compactness({"gon"}, shape_table(r.units), r.borders);
        const double theta = std::numbers::pi / 64.0;
        if (!close(pp, theta * std::cos(theta) / std::sin(theta), 1e-9))
            return fail("64-gon compactness " + std::to_string(pp));
    }

    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const int size = 3 + static_cast<int>(rng() % 58);
        const auto cells = oracles::random_cell_union(size, rng);
        std::vector<GeometryInput> features;
        std::vector<std::string> names;
        int i = 0;
        for (const auto& [x, y] : cells) {
            features.push_back(oracles::grid_square("u" + std::to_string(i++), x, y));
            names.push_back(features.back().unit);
        }
        auto r = preprocess_geometry(features, {snap});
        const auto shape = region_shape(names, shape_table(r.units), r.borders);
        if (shape.perimeter != oracles::boundary_walk_perimeter(cells))
            return fail("trial " + std::to_string(trial) +
                        ": dissolve-free perimeter differs from the boundary walk");
        if (!(shape.compactness > 0.0 && shape.compactness <= 1.0))
            return fail("trial " + std::to_string(trial) + ": compactness " +
                        std::to_string(shape.compactness) + " outside (0, 1]");
    }
    return pass("closed forms at 1e-12/1e-9; 100 unions match the boundary walk exactly");
}

// --- criteria 6 and 8 ------------------------------------------------------

std::string fixture_config_path() {
    return (fs::path(NETREGIONS_DATA_DIR) / "config.json").string();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("netregions_acc_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string json_without_timestamp(const fs::path& p) {
    auto j = nlohmann::json::parse(file_bytes(p));
    j["metadata"].erase("generated_at");
    return j.dump(2);
}

Outcome pipeline_determinism() {
    auto config = load_pipeline_config(fixture_config_path());
    const fs::path root = scratch("det");

    auto run_into = [&](const std::string& name, int threads) {
        PipelineConfig c = config;
        c.output_dir = (root / name).string();
        c.louvain.threads = threads;
        run_pipeline(c);
        return root / name;
    };
    const auto a = run_into("a", 1);
    const auto b = run_into("b", 1);
    const auto c = run_into("c", 3);

    for (const char* name : {"partition_pre.csv", "partition_post.csv", "report.csv",
                             "regions_pre.geojson", "regions_post.geojson"}) {
        if (file_bytes(a / name) != file_bytes(b / name))
            return fail(std::string(name) + " differs between identical runs");
        if (file_bytes(a / name) != file_bytes(c / name))
            return fail(std::string(name) + " differs between 1 and 3 worker threads");
    }
    if (json_without_timestamp(a / "report.json") != json_without_timestamp(b / "report.json"))
        return fail("report.json differs between identical runs");
    if (json_without_timestamp(a / "report.json") != json_without_timestamp(c / "report.json"))
        return fail("report.json differs between 1 and 3 worker threads");
    return pass("six artifacts byte-identical across reruns and thread counts");
}

Outcome fixture_report_completeness() {
    auto config = load_pipeline_config(fixture_config_path());
    config.output_dir = (scratch("report") / "out").string();
    const auto result = run_pipeline(config);

    const auto j = nlohmann::json::parse(report_json(result.report));
    const char* fields[] = {"/schema_version",
                            "/metadata/network",
                            "/metadata/seed",
                            "/metadata/restarts",
                            "/metadata/resolution",
                            "/metadata/node_order",
                            "/metadata/nmi_variant",
                            "/metadata/software_version",
                            "/metadata/generated_at",
                            "/periods/pre/n_nodes",
                            "/periods/pre/n_edges",
                            "/periods/pre/total_weight",
                            "/periods/pre/region_count",
                            "/periods/pre/modularity",
                            "/periods/pre/spatial/mean_compactness",
                            "/periods/pre/spatial/median_compactness",
                            "/periods/pre/spatial/avg_border_per_region",
                            "/periods/post/region_count",
                            "/periods/post/modularity",
                            "/periods/post/spatial/mean_compactness",
                            "/comparison/n_common_nodes",
                            "/comparison/k_pre",
                            "/comparison/k_post",
                            "/comparison/rand",
                            "/comparison/adjusted_rand",
                            "/comparison/jaccard",
                            "/comparison/nmi",
                            "/comparison/z_rand",
                            "/comparison/identical",
                            "/comparison/z_rand_degenerate",
                            "/comparison/dropped_nodes/pre_only",
                            "/comparison/dropped_nodes/post_only"};
    for (const char* field : fields) {
        const nlohmann::json::json_pointer ptr(field);
        if (!j.contains(ptr)) return fail(std::string("report is missing ") + field);
        if (j.at(ptr).is_null() && std::string(field) != "/comparison/z_rand")
            return fail(std::string(field) + " is null");
    }
    const auto& s = result.report.cross.similarity;
    if (s.z_rand_degenerate) return fail("fixture comparison is unexpectedly degenerate");
    if (!(s.adjusted_rand > 0.0 && s.adjusted_rand < 1.0))
        return fail("fixture ARI " + std::to_string(s.adjusted_rand) + " not in (0, 1)");
    if (result.report.cross.dropped_post.empty())
        return fail("fixture should drop one post-only unit");
    return pass("every region-count, modularity, index, border, and compactness field present");
}

// --- criterion 7 -----------------------------------------------------------

Outcome county_scale() {
    std::mt19937_64 rng(707);
    const int n = 3100;
    const int block = 100;  // 31 planted blocks

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> pairs;
    pairs.reserve(520000);
    for (int b = 0; b < n / block; ++b)
        for (int i = b * block; i < (b + 1) * block; ++i)
            for (int j = i + 1; j < (b + 1) * block; ++j)
                pairs.emplace_back(i, j, static_cast<double>(5 + rng() % 5));

    std::set<std::pair<std::uint32_t, std::uint32_t>> cross;
    while (cross.size() < 350000) {
        std::uint32_t i = static_cast<std::uint32_t>(rng() % n);
        std::uint32_t j = static_cast<std::uint32_t>(rng() % n);
        if (i == j) continue;
        if (i > j) std::swap(i, j);
        if (i / block == j / block) continue;
        cross.insert({i, j});
    }
    for (const auto& [i, j] : cross)
        pairs.emplace_back(i, j, static_cast<double>(1 + rng() % 3));
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids.push_back(oracles::node_name(i));
    std::vector<int> planted(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) planted[static_cast<std::size_t>(i)] = i / block;

    const auto graph = WeightedGraph::from_pairs(ids, pairs);

    LouvainConfig cfg;
    cfg.node_order = NodeOrder::Shuffled;
    cfg.restarts = 2;
    cfg.seed = 3;
    const auto detected = louvain(graph, cfg);

    const Partition reference(ids, planted);
    const auto sim = compare_partitions(detected.partition, reference);
    if (!(sim.nmi > 0.5)) return fail("detected partition lost the planted structure");

    std::vector<GeometryInput> features;
    features.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        features.push_back(oracles::grid_square(oracles::node_name(i), i % 62, i / 62));
    auto geo = preprocess_geometry(features, {1.0 / 1024.0});
    const auto shapes = partition_shape_report(detected.partition, shape_table(geo.units),
                                               geo.borders);
    if (shapes.region_count != detected.partition.num_communities())
        return fail("shape report region count mismatch");

    std::ostringstream detail;
    detail << graph.edge_count() << " edges, " << detected.partition.num_communities()
           << " regions, nmi " << std::fixed << std::setprecision(3) << sim.nmi;
    return pass(detail.str());
}

}  // namespace

int main() {
    run_criterion(1, "Louvain matches exhaustive maxima at desk scale", 10.0,
                  louvain_desk_scale);
    run_criterion(2, "similarity indices equal the all-pairs oracle", 30.0,
                  similarity_exactness);
    run_criterion(3, "z-Rand null moments match Monte Carlo permutation", 60.0,
                  z_rand_null_model);
    run_criterion(4, "ARI centers on zero under random relabeling", 0.0, ari_null_behavior);
    run_criterion(5, "shape metrics match closed forms and the boundary walk", 0.0,
                  spatial_analytics);
    run_criterion(6, "pipeline artifacts are byte-identical across reruns and threads", 0.0,
                  pipeline_determinism);
    run_criterion(7, "county-scale detect, compare, and spatial run", 60.0, county_scale);
    run_criterion(8, "bundled fixture report carries the full metric set", 0.0,
                  fixture_report_completeness);
    if (failures > 0) std::cout << failures << " criterion(s) failed\n";
    return failures;
}
