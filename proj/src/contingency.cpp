#include "netregions/contingency.hpp"

namespace netregions {

namespace {

long long choose2(long long s) { return s * (s - 1) / 2; }

}  // namespace

ContingencyTable ContingencyTable::from(const Partition& first, const Partition& second) {
    if (!first.same_node_set(second))
        throw ValidationError(
            "contingency table: partitions cover different node sets (restrict to the common "
            "node set first)");

    ContingencyTable t;
    t.n = static_cast<long long>(first.size());
    const auto k1 = static_cast<std::size_t>(first.num_communities());
    const auto k2 = static_cast<std::size_t>(second.num_communities());
    t.row_sums.assign(k1, 0);
    t.col_sums.assign(k2, 0);
    t.counts.assign(k1 * k2, 0);

    const auto& a = first.labels();
    const auto& b = second.labels();
    for (std::size_t v = 0; v < a.size(); ++v) {
        const auto i = static_cast<std::size_t>(a[v]);
        const auto j = static_cast<std::size_t>(b[v]);
        ++t.counts[i * k2 + j];
        ++t.row_sums[i];
        ++t.col_sums[j];
    }
    return t;
}

PairCounts PairCounts::from(const ContingencyTable& table) {
    PairCounts pc;
    for (long long c : table.counts) pc.n11 += choose2(c);
    long long m1 = 0, m2 = 0;
    for (long long s : table.row_sums) m1 += choose2(s);
    for (long long s : table.col_sums) m2 += choose2(s);
    pc.n10 = m1 - pc.n11;
    pc.n01 = m2 - pc.n11;
    pc.n00 = choose2(table.n) - pc.n11 - pc.n10 - pc.n01;
    return pc;
}

}  // namespace netregions
