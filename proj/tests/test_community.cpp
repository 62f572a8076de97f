#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "netregions/louvain.hpp"
#include "oracles.hpp"

using namespace netregions;

TEST_CASE("modularity closed forms") {
    auto g = oracles::triangle();

    SUBCASE("all-in-one is 1 - gamma") {
        Partition one = Partition::for_graph(g, {0, 0, 0});
        CHECK(modularity(g, one) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(modularity(g, one, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(modularity(g, one, 2.0) == doctest::Approx(-1.0).epsilon(1e-15));
    }
    SUBCASE("singletons on the triangle") {
        Partition single = Partition::for_graph(g, {0, 1, 2});
        CHECK(modularity(g, single) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("modularity of the bridged triangles") {
    auto g = oracles::two_triangle_bridge();
    Partition split = Partition::for_graph(g, {0, 0, 0, 1, 1, 1});
    CHECK(modularity(g, split) == doctest::Approx(5.0 / 14.0).epsilon(1e-15));
}

TEST_CASE("modularity of two disconnected triangles") {
    auto g = oracles::two_triangles();
    Partition split = Partition::for_graph(g, {0, 0, 0, 1, 1, 1});
    CHECK(modularity(g, split) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("self-loops enter the adjacency diagonal doubled") {
    // One isolated node with a loop: all-in-one must still give 1 - gamma,
    // which pins the A_ii = 2 w_ii convention.
    auto g = WeightedGraph::from_pairs({"a"}, {{0, 0, 3.0}});
    Partition one = Partition::for_graph(g, {0});
    CHECK(modularity(g, one) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(modularity(g, one, 0.25) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("modularity matches the dense-matrix oracle on random graphs") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = oracles::random_graph(12, 0.35, 4, rng);
        auto labels = oracles::random_labels(12, 4, rng);
        const double gamma = trial % 3 == 0 ? 1.0 : (trial % 3 == 1 ? 0.5 : 1.7);
        const double lib = modularity(g, Partition::for_graph(g, labels), gamma);
        const double ref = oracles::dense_modularity(oracles::dense_from(g), labels, gamma);
        CHECK(lib == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("modularity is invariant under label permutation") {
    std::mt19937_64 rng(5);
    auto g = oracles::random_graph(15, 0.3, 6, rng);
    auto labels = oracles::random_labels(15, 5, rng);
    auto permuted = labels;
    for (auto& l : permuted) l = (l + 3) * 17 % 1000;  // injective on small ints
    const double a = modularity(g, Partition::for_graph(g, labels));
    const double b = modularity(g, Partition::for_graph(g, permuted));
    CHECK(a == b);
}

TEST_CASE("modularity validates its inputs") {
    auto g = oracles::triangle();
    Partition other({"x", "y", "z"}, {0, 1, 2});
    CHECK_THROWS_AS(modularity(g, other), ValidationError);

    auto isolated = WeightedGraph::from_pairs({"a", "b"}, {});
    CHECK_THROWS_AS(modularity(isolated, Partition::for_graph(isolated, {0, 1})),
                    ValidationError);
}

TEST_CASE("louvain recovers the planted split on the fixtures") {
    SUBCASE("bridged triangles") {
        auto g = oracles::two_triangle_bridge();
        auto r = louvain(g);
        CHECK(r.quality == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
        CHECK(r.partition.labels() == std::vector<int>{0, 0, 0, 1, 1, 1});
    }
    SUBCASE("disconnected triangles") {
        auto g = oracles::two_triangles();
        auto r = louvain(g);
        CHECK(r.quality == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r.partition.labels() == std::vector<int>{0, 0, 0, 1, 1, 1});
    }
    SUBCASE("single triangle ends all-in-one") {
        auto g = oracles::triangle();
        auto r = louvain(g);
        CHECK(r.quality == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.partition.num_communities() == 1);
    }
}

TEST_CASE("louvain matches the exhaustive maximum on the fixtures") {
    for (auto g : {oracles::triangle(), oracles::two_triangles(), oracles::two_triangle_bridge()}) {
        auto best = oracles::exhaustive_max_modularity(g, 1.0);
        auto r = louvain(g);
        CHECK(r.quality == doctest::Approx(best.q).epsilon(1e-12));
    }
}

TEST_CASE("louvain never exceeds the exhaustive maximum") {
    std::mt19937_64 rng(99);
    LouvainConfig cfg;
    cfg.node_order = NodeOrder::Shuffled;
    cfg.restarts = 5;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 4);
        auto g = oracles::random_graph(n, 0.5, 3, rng);
        cfg.seed = trial;
        auto r = louvain(g, cfg);
        auto best = oracles::exhaustive_max_modularity(g, 1.0);
        CHECK(r.quality <= best.q + 1e-9);
    }
}

TEST_CASE("tracked quality agrees with recomputed quality at every level") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_graph(60, 0.1, 8, rng);
        LouvainConfig cfg;
        cfg.node_order = NodeOrder::Shuffled;
        cfg.restarts = 3;
        cfg.seed = trial;
        auto r = louvain(g, cfg);
        REQUIRE(!r.levels.empty());
        for (const auto& level : r.levels)
            CHECK(level.quality_tracked ==
                  doctest::Approx(level.quality_recomputed).epsilon(1e-9));
        CHECK(r.quality == doctest::Approx(r.levels.back().quality_tracked).epsilon(1e-9));
    }
}

TEST_CASE("level qualities never decrease") {
    std::mt19937_64 rng(77);
    auto g = oracles::random_graph(80, 0.08, 5, rng);
    auto r = louvain(g);
    for (std::size_t i = 1; i < r.levels.size(); ++i)
        CHECK(r.levels[i].quality_tracked >= r.levels[i - 1].quality_tracked - 1e-12);
}

TEST_CASE("louvain is deterministic") {
    std::mt19937_64 rng(2024);
    auto g = oracles::random_graph(100, 0.06, 7, rng);

    LouvainConfig cfg;
    cfg.node_order = NodeOrder::Shuffled;
    cfg.restarts = 8;
    cfg.seed = 42;

    auto a = louvain(g, cfg);

    SUBCASE("same config, same result") {
        auto b = louvain(g, cfg);
        CHECK(a.partition.labels() == b.partition.labels());
        CHECK(a.quality == b.quality);
        CHECK(a.best_restart == b.best_restart);
    }
    SUBCASE("thread count does not change the result") {
        for (int threads : {2, 3, 8}) {
            auto cfg2 = cfg;
            cfg2.threads = threads;
            auto b = louvain(g, cfg2);
            CHECK(a.partition.labels() == b.partition.labels());
            CHECK(a.quality == b.quality);
            CHECK(a.best_restart == b.best_restart);
        }
    }
    SUBCASE("a different seed may move, never made irreproducible") {
        auto cfg2 = cfg;
        cfg2.seed = 43;
        auto b = louvain(g, cfg2);
        auto c = louvain(g, cfg2);
        CHECK(b.partition.labels() == c.partition.labels());
    }
}

TEST_CASE("fixed order ignores the restart count") {
    std::mt19937_64 rng(8);
    auto g = oracles::random_graph(40, 0.15, 3, rng);
    LouvainConfig one;
    one.restarts = 1;
    LouvainConfig many;
    many.restarts = 10;
    auto a = louvain(g, one);
    auto b = louvain(g, many);
    CHECK(a.partition.labels() == b.partition.labels());
    CHECK(a.best_restart == 0);
    CHECK(b.best_restart == 0);
}

TEST_CASE("restarts pick the best run") {
    std::mt19937_64 rng(64);
    LouvainConfig shuffled;
    shuffled.node_order = NodeOrder::Shuffled;
    shuffled.restarts = 12;
    shuffled.seed = 7;
    for (int trial = 0; trial < 10; ++trial) {
        auto g = oracles::random_graph(30, 0.2, 4, rng);
        auto multi = louvain(g, shuffled);
        LouvainConfig single = shuffled;
        single.restarts = 1;
        auto solo = louvain(g, single);
        CHECK(multi.quality >= solo.quality - 1e-12);
    }
}

TEST_CASE("louvain config validation") {
    auto g = oracles::triangle();
    LouvainConfig cfg;
    cfg.resolution = 0.0;
    CHECK_THROWS_AS(louvain(g, cfg), ValidationError);
    cfg = {};
    cfg.restarts = 0;
    CHECK_THROWS_AS(louvain(g, cfg), ValidationError);
    cfg = {};
    cfg.threads = 0;
    CHECK_THROWS_AS(louvain(g, cfg), ValidationError);
    cfg = {};
    cfg.min_gain = 0.0;
    CHECK_THROWS_AS(louvain(g, cfg), ValidationError);

    auto empty_m = WeightedGraph::from_pairs({"a", "b"}, {});
    CHECK_THROWS_AS(louvain(empty_m), ValidationError);
}

TEST_CASE("aggregate_by_partition preserves weight and modularity") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracles::random_graph(25, 0.25, 6, rng);
        auto labels = oracles::random_labels(25, 6, rng);
        Partition p = Partition::for_graph(g, labels);
        auto coarse = aggregate_by_partition(g, p);

        CHECK(coarse.node_count() == static_cast<std::size_t>(p.num_communities()));
        CHECK(coarse.total_weight() == doctest::Approx(g.total_weight()).epsilon(1e-12));

        // The coarse all-nodes-distinct partition must score exactly like the
        // fine partition it came from.
        std::vector<int> identity(coarse.node_count());
        for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);
        const double q_fine = modularity(g, p);
        const double q_coarse = modularity(coarse, Partition::for_graph(coarse, identity));
        CHECK(q_fine == doctest::Approx(q_coarse).epsilon(1e-12));
    }
}

TEST_CASE("aggregate_by_partition zero-pads coarse ids") {
    std::mt19937_64 rng(3);
    auto g = oracles::random_graph(40, 0.8, 2, rng);
    std::vector<int> labels(40);
    for (int i = 0; i < 40; ++i) labels[i] = i % 12;
    auto coarse = aggregate_by_partition(g, Partition::for_graph(g, labels));
    REQUIRE(coarse.node_count() == 12);
    CHECK(coarse.id_of(0) == "00");
    CHECK(coarse.id_of(11) == "11");
}

TEST_CASE("partition summary") {
    auto g = oracles::two_triangle_bridge();
    auto r = louvain(g);
    auto s = partition_summary(g, r.partition);
    CHECK(s.num_communities == 2);
    CHECK(s.sizes == std::vector<std::size_t>{3, 3});
    CHECK(s.modularity == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
    CHECK(s.resolution == 1.0);
}

TEST_CASE("higher resolution splits, lower resolution merges") {
    auto g = oracles::two_triangle_bridge();
    LouvainConfig coarse;
    coarse.resolution = 0.05;
    auto merged = louvain(g, coarse);
    CHECK(merged.partition.num_communities() == 1);

    LouvainConfig fine;
    fine.resolution = 1.0;
    auto split = louvain(g, fine);
    CHECK(split.partition.num_communities() == 2);
}
