#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netregions/graph.hpp"
#include "netregions/partition.hpp"

namespace netregions {

/// Node visit order during local moving. Louvain is order-sensitive; the
/// fixed lexicographic order gives one reproducible run, the seeded shuffle
/// lets restarts explore different local optima.
enum class NodeOrder { Fixed, Shuffled };

NodeOrder node_order_from_string(const std::string& s);
std::string to_string(NodeOrder order);

struct LouvainConfig {
    double resolution = 1.0;  // gamma; 1.0 is classic modularity
    std::uint64_t seed = 0;
    int restarts = 10;
    double min_gain = 1e-10;  // termination threshold for local moving
    NodeOrder node_order = NodeOrder::Fixed;
    int threads = 1;  // worker threads across restarts; never changes the result

    void validate() const;
};

/// Per-level diagnostics of the winning run. `quality_tracked` is the Q
/// maintained by the incremental gain bookkeeping; `quality_recomputed` is
/// modularity() evaluated from scratch on the input graph with the level's
/// flattened partition. The two must agree to 1e-9.
struct LouvainLevel {
    std::size_t num_communities = 0;
    double quality_tracked = 0.0;
    double quality_recomputed = 0.0;
};

struct LouvainResult {
    Partition partition;
    double quality = 0.0;
    int best_restart = 0;
    std::vector<LouvainLevel> levels;
};

/// Weighted modularity
///   Q = (1/2m) * sum_ij [A_ij - gamma * k_i k_j / (2m)] * delta(c_i, c_j)
/// with k_i the node strength and the adjacency diagonal carrying self-loops
/// twice (A_ii = 2 w_ii), so that sum_j A_ij = k_i and Q of the all-in-one
/// partition is exactly 1 - gamma.  Range [-1, 1].
double modularity(const WeightedGraph& graph, const Partition& partition, double resolution = 1.0);

/// Two-phase Louvain heuristic (Blondel et al., 2008): local moving until no
/// single-node move gains at least min_gain, then community aggregation,
/// repeated until nothing changes. With restarts > 1 and shuffled order the
/// best-quality run wins (ties broken toward the lower canonical partition).
/// Bit-reproducible for a fixed (graph, config), regardless of thread count.
LouvainResult louvain(const WeightedGraph& graph, const LouvainConfig& config = {});

/// One node per community; inter-community weights summed, intra-community
/// weight (self-loops included) becomes the community node's self-loop.
/// Preserves total weight and the modularity of any coarsening refinement.
/// Coarse node ids are zero-padded community labels ("00", "01", ...).
WeightedGraph aggregate_by_partition(const WeightedGraph& graph, const Partition& partition);

struct PartitionSummary {
    int num_communities = 0;
    std::vector<std::size_t> sizes;
    double modularity = 0.0;
    double resolution = 1.0;
};

PartitionSummary partition_summary(const WeightedGraph& graph, const Partition& partition,
                                   double resolution = 1.0);

}  // namespace netregions
