#include "netregions/partition.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <unordered_map>

namespace netregions {

namespace {

// Dense relabeling by first occurrence. Input labels may be any integers.
std::pair<std::vector<int>, int> canonicalize(const std::vector<int>& labels) {
    std::unordered_map<int, int> remap;
    remap.reserve(labels.size());
    std::vector<int> out(labels.size());
    int next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = remap.emplace(labels[i], next);
        if (inserted) ++next;
        out[i] = it->second;
    }
    return {std::move(out), next};
}

}  // namespace

Partition::Partition(std::vector<std::string> nodes, std::vector<int> labels) {
    if (nodes.size() != labels.size())
        throw ValidationError("partition: " + std::to_string(nodes.size()) + " nodes but " +
                              std::to_string(labels.size()) + " labels");
    if (nodes.empty()) throw ValidationError("partition over an empty node set");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1]))
            throw ValidationError("partition node ids must be sorted and unique");
    nodes_ = std::move(nodes);
    auto [canon, k] = canonicalize(labels);
    labels_ = std::move(canon);
    num_communities_ = k;
}

Partition Partition::for_graph(const WeightedGraph& graph, std::vector<int> labels) {
    return Partition(graph.node_ids(), std::move(labels));
}

Partition Partition::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open partition file '" + path + "'");

    std::vector<std::pair<std::string, std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_line(t, ',');
        if (fields.size() < 2)
            throw ValidationError(path + " line " + std::to_string(line_no) +
                                  ": expected unit_id,community_id");
        rows.emplace_back(trim(fields[0]), trim(fields[1]));
    }
    if (rows.empty()) throw ValidationError(path + ": no partition rows");

    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i].first == rows[i + 1].first)
            throw ValidationError(path + ": duplicate unit id '" + rows[i].first + "'");

    // Community tokens may be arbitrary strings; map them to dense ints.
    std::unordered_map<std::string, int> token_ids;
    std::vector<std::string> nodes;
    std::vector<int> labels;
    nodes.reserve(rows.size());
    labels.reserve(rows.size());
    for (auto& [unit, token] : rows) {
        auto [it, inserted] = token_ids.emplace(token, static_cast<int>(token_ids.size()));
        nodes.push_back(std::move(unit));
        labels.push_back(it->second);
    }
    return Partition(std::move(nodes), std::move(labels));
}

void Partition::write_csv(std::ostream& out) const {
    out << "# schema_version: 1\n";
    out << "unit_id,community_id\n";
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        out << nodes_[i] << ',' << labels_[i] << '\n';
}

void Partition::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write partition file '" + path + "'");
    write_csv(out);
}

int Partition::label_of(std::string_view unit) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), unit);
    if (it == nodes_.end() || *it != unit)
        throw ValidationError("partition does not cover unit '" + std::string(unit) + "'");
    return labels_[static_cast<std::size_t>(it - nodes_.begin())];
}

bool Partition::contains(std::string_view unit) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), unit);
    return it != nodes_.end() && *it == unit;
}

std::vector<std::size_t> Partition::community_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(num_communities_), 0);
    for (int c : labels_) ++sizes[static_cast<std::size_t>(c)];
    return sizes;
}

Partition Partition::restricted_to(const std::vector<std::string>& units) const {
    std::vector<std::string> kept_nodes;
    std::vector<int> kept_labels;
    kept_nodes.reserve(units.size());
    kept_labels.reserve(units.size());
    for (const auto& unit : units) {
        auto it = std::lower_bound(nodes_.begin(), nodes_.end(), unit);
        if (it == nodes_.end() || *it != unit)
            throw ValidationError("partition does not cover unit '" + unit + "'");
        kept_nodes.push_back(unit);
        kept_labels.push_back(labels_[static_cast<std::size_t>(it - nodes_.begin())]);
    }
    if (kept_nodes.empty())
        throw ValidationError("partition restriction produced an empty node set");
    return Partition(std::move(kept_nodes), std::move(kept_labels));
}

}  // namespace netregions
