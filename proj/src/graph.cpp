#include "netregions/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace netregions {

namespace {

// Sorts (i, j, w) triples by pair then by weight and sums duplicates in that
// order. Sorting before reduction is what makes ingestion order-independent:
// the same multiset of rows always produces the same floating-point sums.
std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> combine_sorted(
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> triples) {
    std::sort(triples.begin(), triples.end());
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> out;
    out.reserve(triples.size());
    std::size_t i = 0;
    while (i < triples.size()) {
        auto [a, b, w] = triples[i];
        KahanSum sum;
        sum.add(w);
        std::size_t j = i + 1;
        while (j < triples.size() && std::get<0>(triples[j]) == a && std::get<1>(triples[j]) == b) {
            sum.add(std::get<2>(triples[j]));
            ++j;
        }
        out.emplace_back(a, b, sum.value());
        i = j;
    }
    return out;
}

std::vector<std::string> sorted_unique_ids(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace

Symmetrize symmetrize_from_string(const std::string& s) {
    if (s == "sum") return Symmetrize::Sum;
    if (s == "mean") return Symmetrize::Mean;
    if (s == "max") return Symmetrize::Max;
    throw ValidationError("unknown symmetrization mode '" + s + "' (expected sum, mean or max)");
}

std::string to_string(Symmetrize mode) {
    switch (mode) {
        case Symmetrize::Sum: return "sum";
        case Symmetrize::Mean: return "mean";
        case Symmetrize::Max: return "max";
    }
    return "sum";
}

Crosswalk Crosswalk::prefix(std::size_t length) {
    if (length == 0) throw ValidationError("crosswalk prefix length must be positive");
    Crosswalk cw;
    cw.use_prefix_ = true;
    cw.prefix_len_ = length;
    return cw;
}

Crosswalk Crosswalk::from_table(std::unordered_map<std::string, std::string> table) {
    Crosswalk cw;
    cw.table_ = std::move(table);
    return cw;
}

Crosswalk Crosswalk::load_csv(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open crosswalk file '" + path + "'");
    std::unordered_map<std::string, std::string> table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {  // header row required; first two columns are used
            header_seen = true;
            continue;
        }
        auto fields = split_line(t, delimiter);
        if (fields.size() < 2)
            throw ValidationError("crosswalk '" + path + "' line " + std::to_string(line_no) +
                                  ": expected at least two columns");
        std::string fine = trim(fields[0]);
        std::string coarse = trim(fields[1]);
        if (fine.empty() || coarse.empty())
            throw ValidationError("crosswalk '" + path + "' line " + std::to_string(line_no) +
                                  ": empty id");
        auto [it, inserted] = table.emplace(fine, coarse);
        if (!inserted && it->second != coarse)
            throw ValidationError("crosswalk '" + path + "' line " + std::to_string(line_no) +
                                  ": fine id '" + fine + "' maps to both '" + it->second +
                                  "' and '" + coarse + "'");
    }
    if (table.empty()) throw ValidationError("crosswalk '" + path + "' has no mapping rows");
    return from_table(std::move(table));
}

std::string Crosswalk::map(const std::string& fine_id) const {
    if (use_prefix_) {
        if (fine_id.size() < prefix_len_)
            throw ValidationError("unit id '" + fine_id + "' is shorter than the crosswalk prefix length " +
                                  std::to_string(prefix_len_));
        return fine_id.substr(0, prefix_len_);
    }
    auto it = table_.find(fine_id);
    if (it == table_.end())
        throw ValidationError("unit id '" + fine_id + "' is not mapped by the crosswalk");
    return it->second;
}

std::optional<std::size_t> WeightedGraph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void WeightedGraph::dump_edges(std::ostream& out) const {
    out << "unit_a,unit_b,weight\n";
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (loop_[i] > 0.0)
            out << ids_[i] << ',' << ids_[i] << ',' << format_sig12(loop_[i]) << '\n';
        for (const auto& [j, w] : adj_[i]) {
            if (j > i) out << ids_[i] << ',' << ids_[j] << ',' << format_sig12(w) << '\n';
        }
    }
}

WeightedGraph WeightedGraph::from_pairs(
    std::vector<std::string> ids,
    const std::vector<std::tuple<std::uint32_t, std::uint32_t, double>>& pairs) {
    for (std::size_t i = 0; i + 1 < ids.size(); ++i)
        if (!(ids[i] < ids[i + 1]))
            throw ValidationError("graph node ids must be sorted and unique");
    for (const auto& id : ids)
        if (id.empty()) throw ValidationError("empty unit id");

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> normalized;
    normalized.reserve(pairs.size());
    for (const auto& [a, b, w] : pairs) {
        if (a >= ids.size() || b >= ids.size())
            throw ValidationError("edge references a node index out of range");
        if (w < 0.0) throw ValidationError("negative edge weight");
        if (w == 0.0) continue;
        normalized.emplace_back(std::min(a, b), std::max(a, b), w);
    }
    normalized = combine_sorted(std::move(normalized));

    WeightedGraph g;
    g.ids_ = std::move(ids);
    g.index_.reserve(g.ids_.size());
    for (std::size_t i = 0; i < g.ids_.size(); ++i) g.index_.emplace(g.ids_[i], i);
    g.adj_.assign(g.ids_.size(), {});
    g.loop_.assign(g.ids_.size(), 0.0);
    g.strength_.assign(g.ids_.size(), 0.0);

    KahanSum m;
    for (const auto& [a, b, w] : normalized) {
        if (w <= 0.0) continue;
        m.add(w);
        ++g.edge_count_;
        if (a == b) {
            g.loop_[a] = w;
        } else {
            g.adj_[a].emplace_back(b, w);
            g.adj_[b].emplace_back(a, w);
        }
    }
    g.m_ = m.value();

    for (std::size_t i = 0; i < g.ids_.size(); ++i) {
        std::sort(g.adj_[i].begin(), g.adj_[i].end());
        KahanSum s;
        for (const auto& [j, w] : g.adj_[i]) s.add(w);
        s.add(2.0 * g.loop_[i]);  // self-loop counts twice in strength
        g.strength_[i] = s.value();
    }
    return g;
}

void GraphBuilder::add(const std::string& origin, const std::string& destination, double weight) {
    if (origin.empty() || destination.empty()) throw ValidationError("empty unit id in flow record");
    if (weight < 0.0)
        throw ValidationError("negative flow weight " + format_sig12(weight) + " for " + origin +
                              " -> " + destination);
    if (weight == 0.0) return;  // dropped on ingestion
    records_.push_back(Rec{origin, destination, weight});
}

WeightedGraph GraphBuilder::build(Symmetrize mode) const {
    std::vector<std::string> ids;
    ids.reserve(records_.size() * 2);
    for (const auto& r : records_) {
        ids.push_back(r.origin);
        ids.push_back(r.destination);
    }
    ids = sorted_unique_ids(std::move(ids));
    if (ids.empty()) throw ValidationError("empty result graph: no flow records");

    std::unordered_map<std::string, std::uint32_t> index;
    index.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<std::uint32_t>(i));

    // First combine parallel rows per direction, then fold the two directions.
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> directed;
    directed.reserve(records_.size());
    for (const auto& r : records_)
        directed.emplace_back(index.at(r.origin), index.at(r.destination), r.weight);
    directed = combine_sorted(std::move(directed));

    struct Dir {
        double forward = 0.0;  // lower index -> higher index
        double backward = 0.0;
        bool has_forward = false;
        bool has_backward = false;
    };
    std::map<std::pair<std::uint32_t, std::uint32_t>, Dir> by_pair;
    for (const auto& [a, b, w] : directed) {
        auto key = std::minmax(a, b);
        Dir& d = by_pair[{key.first, key.second}];
        if (a <= b) {
            d.forward = w;
            d.has_forward = true;
        } else {
            d.backward = w;
            d.has_backward = true;
        }
    }

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> pairs;
    pairs.reserve(by_pair.size());
    for (const auto& [key, d] : by_pair) {
        double w = 0.0;
        if (key.first == key.second) {
            w = d.forward;  // self-pairs pass through under every mode
        } else {
            switch (mode) {
                case Symmetrize::Sum: w = d.forward + d.backward; break;
                case Symmetrize::Mean: w = (d.forward + d.backward) / 2.0; break;
                case Symmetrize::Max: w = std::max(d.forward, d.backward); break;
            }
        }
        if (w > 0.0) pairs.emplace_back(key.first, key.second, w);
    }
    return WeightedGraph::from_pairs(std::move(ids), pairs);
}

namespace {

double parse_weight(const std::string& field, std::size_t line_no) {
    std::string t = trim(field);
    if (t.empty())
        throw ValidationError("line " + std::to_string(line_no) + ": empty weight field");
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ValidationError("line " + std::to_string(line_no) + ": malformed weight '" + t + "'");
    return value;
}

}  // namespace

WeightedGraph ingest_edge_list(std::istream& in, const IngestOptions& options) {
    std::string line;
    std::size_t line_no = 0;

    // Header row is required; columns are located by name.
    std::size_t col_origin = 0, col_dest = 0, col_weight = 0;
    bool header_seen = false;
    std::size_t header_width = 0;
    GraphBuilder builder;

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_line(t, options.delimiter);
        if (!header_seen) {
            header_seen = true;
            header_width = fields.size();
            bool found_o = false, found_d = false, found_w = false;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                std::string name = trim(fields[i]);
                if (name == options.origin_col) { col_origin = i; found_o = true; }
                if (name == options.dest_col) { col_dest = i; found_d = true; }
                if (name == options.weight_col) { col_weight = i; found_w = true; }
            }
            if (!found_o || !found_d || !found_w) {
                std::string have;
                for (std::size_t i = 0; i < fields.size(); ++i)
                    have += (i ? ", " : "") + trim(fields[i]);
                throw ValidationError("header is missing required columns (need '" +
                                      options.origin_col + "', '" + options.dest_col + "', '" +
                                      options.weight_col + "'; file has: " + have + ")");
            }
            continue;
        }
        if (fields.size() != header_width)
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header_width) + " fields, found " +
                                  std::to_string(fields.size()));
        std::string origin = trim(fields[col_origin]);
        std::string dest = trim(fields[col_dest]);
        if (origin.empty() || dest.empty())
            throw ValidationError("line " + std::to_string(line_no) + ": empty unit id");
        double w = parse_weight(fields[col_weight], line_no);
        if (w < 0.0)
            throw ValidationError("line " + std::to_string(line_no) + ": negative weight " +
                                  format_sig12(w));
        builder.add(origin, dest, w);
    }
    if (!header_seen) throw ValidationError("edge list is empty (header row required)");
    if (builder.record_count() == 0) throw ValidationError("empty result graph: no usable rows");
    return builder.build(options.symmetrize);
}

WeightedGraph ingest_edge_list_file(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open edge list '" + path + "'");
    try {
        return ingest_edge_list(in, options);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

WeightedGraph aggregate(const WeightedGraph& graph, const Crosswalk& crosswalk) {
    const auto& fine_ids = graph.node_ids();
    std::vector<std::string> coarse_of(fine_ids.size());
    std::vector<std::string> coarse_ids;
    coarse_ids.reserve(fine_ids.size());
    for (std::size_t i = 0; i < fine_ids.size(); ++i) {
        coarse_of[i] = crosswalk.map(fine_ids[i]);
        coarse_ids.push_back(coarse_of[i]);
    }
    coarse_ids = sorted_unique_ids(std::move(coarse_ids));
    std::unordered_map<std::string, std::uint32_t> coarse_index;
    coarse_index.reserve(coarse_ids.size());
    for (std::size_t i = 0; i < coarse_ids.size(); ++i)
        coarse_index.emplace(coarse_ids[i], static_cast<std::uint32_t>(i));

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> pairs;
    pairs.reserve(graph.edge_count());
    for (std::size_t i = 0; i < fine_ids.size(); ++i) {
        std::uint32_t ci = coarse_index.at(coarse_of[i]);
        if (graph.self_loop(i) > 0.0) pairs.emplace_back(ci, ci, graph.self_loop(i));
        for (const auto& [j, w] : graph.neighbors(i)) {
            if (j < i) continue;  // each undirected edge once
            std::uint32_t cj = coarse_index.at(coarse_of[j]);
            pairs.emplace_back(std::min(ci, cj), std::max(ci, cj), w);
        }
    }
    return WeightedGraph::from_pairs(std::move(coarse_ids), pairs);
}

RestrictResult restrict_to_common(const WeightedGraph& g1, const WeightedGraph& g2) {
    const auto& ids1 = g1.node_ids();
    const auto& ids2 = g2.node_ids();
    std::vector<std::string> common;
    std::set_intersection(ids1.begin(), ids1.end(), ids2.begin(), ids2.end(),
                          std::back_inserter(common));
    if (common.empty())
        throw ValidationError("empty intersection: the two graphs share no unit ids");

    std::vector<std::string> dropped1, dropped2;
    std::set_difference(ids1.begin(), ids1.end(), common.begin(), common.end(),
                        std::back_inserter(dropped1));
    std::set_difference(ids2.begin(), ids2.end(), common.begin(), common.end(),
                        std::back_inserter(dropped2));

    auto restrict_one = [&common](const WeightedGraph& g) {
        std::unordered_map<std::string, std::uint32_t> keep;
        keep.reserve(common.size());
        for (std::size_t i = 0; i < common.size(); ++i)
            keep.emplace(common[i], static_cast<std::uint32_t>(i));
        std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> pairs;
        pairs.reserve(g.edge_count());
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            auto it_i = keep.find(g.id_of(i));
            if (it_i == keep.end()) continue;
            if (g.self_loop(i) > 0.0) pairs.emplace_back(it_i->second, it_i->second, g.self_loop(i));
            for (const auto& [j, w] : g.neighbors(i)) {
                if (j < i) continue;
                auto it_j = keep.find(g.id_of(j));
                if (it_j == keep.end()) continue;
                pairs.emplace_back(std::min(it_i->second, it_j->second),
                                   std::max(it_i->second, it_j->second), w);
            }
        }
        return WeightedGraph::from_pairs(common, pairs);
    };
    WeightedGraph r1 = restrict_one(g1);
    WeightedGraph r2 = restrict_one(g2);
    return RestrictResult{std::move(r1), std::move(r2), std::move(dropped1), std::move(dropped2)};
}

}  // namespace netregions
