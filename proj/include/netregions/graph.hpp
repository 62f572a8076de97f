#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netregions/common.hpp"

namespace netregions {

/// One directed flow row: origin -> destination with a non-negative weight
/// (visit count, connectedness index, ...). Unit ids are opaque strings;
/// only the aggregation crosswalk ever interprets their structure.
struct FlowRecord {
    std::string origin;
    std::string destination;
    double weight = 0.0;
};

/// How the two directions of a directed pair combine into one undirected edge.
enum class Symmetrize { Sum, Mean, Max };

Symmetrize symmetrize_from_string(const std::string& s);
std::string to_string(Symmetrize mode);

/// Column/delimiter configuration for delimited edge-list input.
/// A header row is required; columns are located by name.
struct IngestOptions {
    std::string origin_col = "origin";
    std::string dest_col = "destination";
    std::string weight_col = "weight";
    char delimiter = ',';
    Symmetrize symmetrize = Symmetrize::Sum;
};

/// Maps fine unit ids to coarse unit ids, either by fixed-length prefix
/// (FIPS-style: the first 5 digits of a 12-digit block-group id name its
/// county) or by an explicit lookup table.
class Crosswalk {
public:
    static Crosswalk prefix(std::size_t length);
    static Crosswalk from_table(std::unordered_map<std::string, std::string> table);
    /// Two-column lookup CSV (fine_id, coarse_id), header row required.
    static Crosswalk load_csv(const std::string& path, char delimiter = ',');

    /// Throws ValidationError for an unmapped id.
    std::string map(const std::string& fine_id) const;

private:
    Crosswalk() = default;
    bool use_prefix_ = false;
    std::size_t prefix_len_ = 0;
    std::unordered_map<std::string, std::string> table_;
};

/// Undirected weighted graph over string-keyed units.
///
/// Node order is canonical (lexicographic by id), which every downstream
/// algorithm relies on for reproducibility. Self-loops are allowed and follow
/// the standard modularity bookkeeping:
///   strength(i) = sum_{j!=i} w(i,j) + 2*w(i,i)
///   m           = sum_{i<=j} w(i,j)        (loops counted once)
/// so that sum_i strength(i) == 2*m.
///
/// Instances are immutable once built and safe to share across threads.
class WeightedGraph {
public:
    std::size_t node_count() const { return ids_.size(); }
    /// Number of unordered pairs with positive weight, self-loops included.
    std::size_t edge_count() const { return edge_count_; }
    double total_weight() const { return m_; }

    const std::vector<std::string>& node_ids() const { return ids_; }
    const std::string& id_of(std::size_t index) const { return ids_[index]; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    double strength(std::size_t index) const { return strength_[index]; }
    const std::vector<double>& strengths() const { return strength_; }
    double self_loop(std::size_t index) const { return loop_[index]; }

    /// Neighbors of a node, self excluded, sorted by neighbor index.
    const std::vector<std::pair<std::uint32_t, double>>& neighbors(std::size_t index) const {
        return adj_[index];
    }

    /// Canonical edge list: pairs sorted lexicographically, weights with
    /// 12 significant digits. Debug surface, also used by `detect --dump-graph`.
    void dump_edges(std::ostream& out) const;

    /// Builds from undirected pair weights; duplicate pairs are combined
    /// and i==j entries are self-loops. Ids must be sorted and unique.
    static WeightedGraph from_pairs(std::vector<std::string> ids,
                                    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& pairs);

private:
    friend class GraphBuilder;
    WeightedGraph() = default;

    std::vector<std::string> ids_;                        // sorted
    std::unordered_map<std::string, std::size_t> index_;  // id -> position
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj_;
    std::vector<double> loop_;
    std::vector<double> strength_;
    double m_ = 0.0;
    std::size_t edge_count_ = 0;
};

/// Accumulates directed flow records and symmetrizes them into a
/// WeightedGraph. Construction is single-threaded; the result is immutable.
///
/// The build is exactly order-independent: contributions are sorted before
/// reduction, so shuffled input rows produce a bit-identical graph.
class GraphBuilder {
public:
    /// Zero-weight records are dropped; negative weights throw.
    void add(const std::string& origin, const std::string& destination, double weight);
    std::size_t record_count() const { return records_.size(); }

    WeightedGraph build(Symmetrize mode = Symmetrize::Sum) const;

private:
    struct Rec {
        std::string origin, destination;
        double weight;
    };
    std::vector<Rec> records_;
};

/// Reads a delimited edge list (header row required) into an undirected
/// graph. Directed duplicates are combined per the symmetrization mode,
/// parallel rows for the same direction are summed, zero-weight rows are
/// dropped. Malformed rows and negative weights are reported with their
/// line number; an empty result graph is an error.
WeightedGraph ingest_edge_list(std::istream& in, const IngestOptions& options = {});
WeightedGraph ingest_edge_list_file(const std::string& path, const IngestOptions& options = {});

/// Coarsens a graph through a crosswalk: coarse-pair weight is the sum of
/// all fine-level weights between the preimages; fine edges internal to one
/// coarse unit become self-loops. Total weight is preserved.
WeightedGraph aggregate(const WeightedGraph& graph, const Crosswalk& crosswalk);

struct RestrictResult {
    WeightedGraph first;
    WeightedGraph second;
    std::vector<std::string> dropped_first;
    std::vector<std::string> dropped_second;
};

/// Restricts both graphs to their common node set (the known-node
/// correspondence precondition: partitions are only comparable over
/// identified shared nodes). Throws ValidationError when the intersection
/// is empty. Nodes whose every edge crossed into the dropped set survive
/// as isolated nodes.
RestrictResult restrict_to_common(const WeightedGraph& g1, const WeightedGraph& g2);

}  // namespace netregions
