#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "netregions/common.hpp"
#include "netregions/graph.hpp"

namespace netregions {

/// Total assignment of every node of a graph to exactly one community.
///
/// Labels are always canonical: dense integers 0..k-1 assigned by first
/// occurrence in lexicographic node order, so two partitions that group the
/// nodes identically compare equal label-for-label regardless of how they
/// were produced.
class Partition {
public:
    /// `nodes` must be sorted and unique; `labels` is aligned to it.
    /// Labels are canonicalized on construction.
    Partition(std::vector<std::string> nodes, std::vector<int> labels);

    static Partition for_graph(const WeightedGraph& graph, std::vector<int> labels);

    /// CSV with columns (unit_id, community_id); '#' comment lines skipped,
    /// header required. Community tokens may be arbitrary strings.
    static Partition load_csv(const std::string& path);
    void save_csv(const std::string& path) const;
    void write_csv(std::ostream& out) const;

    std::size_t size() const { return nodes_.size(); }
    int num_communities() const { return num_communities_; }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<int>& labels() const { return labels_; }
    int label_at(std::size_t index) const { return labels_[index]; }
    /// Throws ValidationError if the unit is not covered.
    int label_of(std::string_view unit) const;
    bool contains(std::string_view unit) const;

    std::vector<std::size_t> community_sizes() const;

    bool same_node_set(const Partition& other) const { return nodes_ == other.nodes_; }
    bool same_node_set(const WeightedGraph& graph) const { return nodes_ == graph.node_ids(); }
    /// True when both partitions group their (identical) node set the same way.
    bool same_grouping(const Partition& other) const {
        return same_node_set(other) && labels_ == other.labels_;
    }

    /// Restricts to the given sorted unit subset (comparison after node-set
    /// intersection); labels are re-canonicalized. Throws ValidationError
    /// when a requested unit is not covered.
    Partition restricted_to(const std::vector<std::string>& units) const;

private:
    std::vector<std::string> nodes_;  // sorted, unique
    std::vector<int> labels_;         // canonical dense labels
    int num_communities_ = 0;
};

}  // namespace netregions
