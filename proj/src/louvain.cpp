#include "netregions/louvain.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace netregions {

NodeOrder node_order_from_string(const std::string& s) {
    if (s == "fixed") return NodeOrder::Fixed;
    if (s == "shuffled") return NodeOrder::Shuffled;
    throw ValidationError("unknown node order '" + s + "' (expected fixed or shuffled)");
}

std::string to_string(NodeOrder order) {
    return order == NodeOrder::Fixed ? "fixed" : "shuffled";
}

void LouvainConfig::validate() const {
    if (!(resolution > 0.0)) throw ValidationError("resolution must be positive");
    if (restarts < 1) throw ValidationError("restarts must be >= 1");
    if (!(min_gain > 0.0)) throw ValidationError("min_gain must be positive");
    if (threads < 1) throw ValidationError("threads must be >= 1");
}

double modularity(const WeightedGraph& graph, const Partition& partition, double resolution) {
    if (!partition.same_node_set(graph))
        throw ValidationError("partition and graph cover different node sets");
    const double m = graph.total_weight();
    if (!(m > 0.0)) throw ValidationError("modularity is undefined for a graph with m = 0");

    const int k = partition.num_communities();
    const auto& labels = partition.labels();

    // Per-community intra weight (each edge once, loops once) and strength sum.
    std::vector<KahanSum> intra(static_cast<std::size_t>(k));
    std::vector<KahanSum> tot(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const int ci = labels[i];
        tot[ci].add(graph.strength(i));
        if (graph.self_loop(i) > 0.0) intra[ci].add(graph.self_loop(i));
        for (const auto& [j, w] : graph.neighbors(i)) {
            if (j <= i) continue;
            if (labels[j] == ci) intra[ci].add(w);
        }
    }
    KahanSum q;
    const double two_m = 2.0 * m;
    for (int c = 0; c < k; ++c) {
        const double frac_tot = tot[c].value() / two_m;
        q.add(intra[c].value() / m - resolution * frac_tot * frac_tot);
    }
    return q.value();
}

namespace {

// Index-level working graph for one Louvain hierarchy level.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // loops excluded
    std::vector<double> loop;
    std::vector<double> strength;
    double m = 0.0;

    std::size_t n() const { return adj.size(); }

    static LevelGraph from(const WeightedGraph& g) {
        LevelGraph lg;
        lg.adj.reserve(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) lg.adj.push_back(g.neighbors(i));
        lg.loop.resize(g.node_count());
        lg.strength.resize(g.node_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            lg.loop[i] = g.self_loop(i);
            lg.strength[i] = g.strength(i);
        }
        lg.m = g.total_weight();
        return lg;
    }
};

double singleton_quality(const LevelGraph& g, double gamma) {
    KahanSum q;
    const double two_m = 2.0 * g.m;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const double frac = g.strength[i] / two_m;
        q.add(g.loop[i] / g.m - gamma * frac * frac);
    }
    return q.value();
}

// One pass of local moving. Sweeps nodes in `order` until a full sweep makes
// no move. Gains are relative to the node sitting alone in its own community:
//   gain(C) = w(i,C)/m - gamma * k_i * tot(C) / (2 m^2)
// the loop term cancels between candidates, so it is omitted throughout.
// Among equal best gains the smallest community id wins.
bool local_moving(const LevelGraph& g, double gamma, double min_gain,
                  const std::vector<std::uint32_t>& order, std::vector<std::uint32_t>& labels,
                  double& q_tracked) {
    const std::size_t n = g.n();
    std::vector<double> tot(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) tot[labels[i]] += g.strength[i];

    std::vector<double> w_to(n, 0.0);
    std::vector<std::uint32_t> touched;
    touched.reserve(64);

    const double inv_m = 1.0 / g.m;
    const double inv_2m2 = 1.0 / (2.0 * g.m * g.m);

    bool any_move = false;
    bool moved_in_sweep = true;
    while (moved_in_sweep) {
        moved_in_sweep = false;
        for (std::uint32_t node : order) {
            const std::uint32_t cur = labels[node];
            const double k_node = g.strength[node];

            touched.clear();
            for (const auto& [nbr, w] : g.adj[node]) {
                const std::uint32_t c = labels[nbr];
                if (w_to[c] == 0.0) touched.push_back(c);
                w_to[c] += w;
            }

            tot[cur] -= k_node;
            auto gain_of = [&](std::uint32_t c) {
                return w_to[c] * inv_m - gamma * k_node * tot[c] * inv_2m2;
            };
            const double gain_stay = gain_of(cur);
            double best_gain = gain_stay;
            std::uint32_t best = cur;
            for (std::uint32_t c : touched) {
                const double gain = gain_of(c);
                if (gain > best_gain || (gain == best_gain && c < best)) {
                    best_gain = gain;
                    best = c;
                }
            }

            if (best != cur && best_gain - gain_stay >= min_gain) {
                labels[node] = best;
                tot[best] += k_node;
                q_tracked += best_gain - gain_stay;
                moved_in_sweep = true;
                any_move = true;
            } else {
                tot[cur] += k_node;
            }

            for (std::uint32_t c : touched) w_to[c] = 0.0;
        }
    }
    return any_move;
}

// Renumbers level labels densely by first occurrence in node-index order.
std::uint32_t renumber(std::vector<std::uint32_t>& labels) {
    std::vector<std::uint32_t> remap(labels.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& l : labels) {
        if (remap[l] == UINT32_MAX) remap[l] = next++;
        l = remap[l];
    }
    return next;
}

LevelGraph aggregate_level(const LevelGraph& g, const std::vector<std::uint32_t>& labels,
                           std::uint32_t k) {
    LevelGraph out;
    out.adj.assign(k, {});
    out.loop.assign(k, 0.0);
    out.strength.assign(k, 0.0);

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triples;
    for (std::size_t i = 0; i < g.n(); ++i) {
        const std::uint32_t ci = labels[i];
        if (g.loop[i] != 0.0) triples.emplace_back(ci, ci, g.loop[i]);
        for (const auto& [j, w] : g.adj[i]) {
            if (j <= i) continue;
            const std::uint32_t cj = labels[j];
            triples.emplace_back(std::min(ci, cj), std::max(ci, cj), w);
        }
    }
    std::sort(triples.begin(), triples.end());
    std::size_t idx = 0;
    KahanSum m;
    while (idx < triples.size()) {
        auto [a, b, w0] = triples[idx];
        KahanSum sum;
        sum.add(w0);
        std::size_t j = idx + 1;
        while (j < triples.size() && std::get<0>(triples[j]) == a && std::get<1>(triples[j]) == b) {
            sum.add(std::get<2>(triples[j]));
            ++j;
        }
        const double w = sum.value();
        m.add(w);
        if (a == b) {
            out.loop[a] = w;
        } else {
            out.adj[a].emplace_back(b, w);
            out.adj[b].emplace_back(a, w);
        }
        idx = j;
    }
    out.m = m.value();
    for (std::uint32_t c = 0; c < k; ++c) {
        std::sort(out.adj[c].begin(), out.adj[c].end());
        KahanSum s;
        for (const auto& [j, w] : out.adj[c]) s.add(w);
        s.add(2.0 * out.loop[c]);
        out.strength[c] = s.value();
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Hand-rolled Fisher-Yates: std::shuffle's algorithm is implementation
// defined, which would break byte-reproducibility across standard libraries.
void fisher_yates(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

struct SingleRun {
    std::vector<int> labels;  // on the input graph's nodes
    double quality = 0.0;
    std::vector<LouvainLevel> levels;
};

SingleRun run_once(const WeightedGraph& graph, const LouvainConfig& config, int restart) {
    LevelGraph level = LevelGraph::from(graph);
    const double gamma = config.resolution;

    std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(restart))));

    // node -> community of the current level, composed across levels
    std::vector<std::uint32_t> node_to_comm(graph.node_count());
    for (std::size_t i = 0; i < node_to_comm.size(); ++i)
        node_to_comm[i] = static_cast<std::uint32_t>(i);

    SingleRun run;
    double q_tracked = singleton_quality(level, gamma);

    while (true) {
        std::vector<std::uint32_t> order(level.n());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
        if (config.node_order == NodeOrder::Shuffled) fisher_yates(order, rng);

        std::vector<std::uint32_t> labels(level.n());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<std::uint32_t>(i);

        const bool moved = local_moving(level, gamma, config.min_gain, order, labels, q_tracked);
        if (!moved && !run.levels.empty()) break;

        const std::uint32_t k = renumber(labels);
        for (auto& c : node_to_comm) c = labels[c];

        std::vector<int> flat(node_to_comm.begin(), node_to_comm.end());
        LouvainLevel diag;
        diag.num_communities = k;
        diag.quality_tracked = q_tracked;
        diag.quality_recomputed =
            modularity(graph, Partition::for_graph(graph, std::move(flat)), gamma);
        run.levels.push_back(diag);

        if (!moved || k == level.n()) break;
        level = aggregate_level(level, labels, k);
    }

    run.labels.assign(node_to_comm.begin(), node_to_comm.end());
    run.quality = run.levels.empty() ? q_tracked : run.levels.back().quality_tracked;
    return run;
}

}  // namespace

LouvainResult louvain(const WeightedGraph& graph, const LouvainConfig& config) {
    config.validate();
    if (graph.node_count() == 0) throw ValidationError("louvain: empty graph");
    if (!(graph.total_weight() > 0.0))
        throw ValidationError("louvain: graph has no positive edge weight (m = 0)");

    // With the fixed order every restart is the same run.
    const int restarts = config.node_order == NodeOrder::Fixed ? 1 : config.restarts;

    std::vector<SingleRun> runs(static_cast<std::size_t>(restarts));
    const int threads = std::min(config.threads, restarts);
    if (threads <= 1) {
        for (int r = 0; r < restarts; ++r) runs[r] = run_once(graph, config, r);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                for (int r = t; r < restarts; r += threads) runs[r] = run_once(graph, config, r);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Best quality wins; exact ties go to the lower canonical partition so the
    // selection is independent of restart scheduling.
    int best = 0;
    std::vector<int> best_canon = Partition::for_graph(graph, runs[0].labels).labels();
    for (int r = 1; r < restarts; ++r) {
        if (runs[r].quality > runs[best].quality) {
            best = r;
            best_canon = Partition::for_graph(graph, runs[r].labels).labels();
        } else if (runs[r].quality == runs[best].quality) {
            auto canon = Partition::for_graph(graph, runs[r].labels).labels();
            if (canon < best_canon) {
                best = r;
                best_canon = std::move(canon);
            }
        }
    }

    Partition partition = Partition::for_graph(graph, runs[best].labels);
    const double quality = modularity(graph, partition, config.resolution);
    return LouvainResult{std::move(partition), quality, best, std::move(runs[best].levels)};
}

WeightedGraph aggregate_by_partition(const WeightedGraph& graph, const Partition& partition) {
    if (!partition.same_node_set(graph))
        throw ValidationError("partition and graph cover different node sets");
    const int k = partition.num_communities();

    // Zero-padded labels keep lexicographic node order equal to numeric order.
    std::size_t width = 1;
    for (int v = k - 1; v >= 10; v /= 10) ++width;
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        std::string s = std::to_string(c);
        ids.push_back(std::string(width - s.size(), '0') + s);
    }

    const auto& labels = partition.labels();
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> pairs;
    pairs.reserve(graph.edge_count());
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto ci = static_cast<std::uint32_t>(labels[i]);
        if (graph.self_loop(i) > 0.0) pairs.emplace_back(ci, ci, graph.self_loop(i));
        for (const auto& [j, w] : graph.neighbors(i)) {
            if (j <= i) continue;
            const auto cj = static_cast<std::uint32_t>(labels[j]);
            pairs.emplace_back(std::min(ci, cj), std::max(ci, cj), w);
        }
    }
    return WeightedGraph::from_pairs(std::move(ids), pairs);
}

PartitionSummary partition_summary(const WeightedGraph& graph, const Partition& partition,
                                   double resolution) {
    PartitionSummary s;
    s.num_communities = partition.num_communities();
    s.sizes = partition.community_sizes();
    s.modularity = modularity(graph, partition, resolution);
    s.resolution = resolution;
    return s;
}

}  // namespace netregions
