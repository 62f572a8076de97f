#pragma once

#include <cstdint>
#include <vector>

#include "netregions/partition.hpp"

namespace netregions {

/// Exact integer contingency table between two partitions of the same node
/// set: counts[i*k2+j] is the number of nodes in community i of the first
/// partition and community j of the second. All similarity indices are pure
/// functions of this table.
struct ContingencyTable {
    long long n = 0;
    std::vector<long long> row_sums;  // community sizes of the first partition
    std::vector<long long> col_sums;  // community sizes of the second
    std::vector<long long> counts;    // row-major k1 x k2

    std::size_t k1() const { return row_sums.size(); }
    std::size_t k2() const { return col_sums.size(); }
    long long at(std::size_t i, std::size_t j) const { return counts[i * k2() + j]; }

    /// Throws ValidationError when the node sets differ (restrict both
    /// graphs/partitions to the common node set first).
    static ContingencyTable from(const Partition& first, const Partition& second);
};

/// The four pair classes over all C(n,2) node pairs:
///   n11 same community in both partitions, n10 same in the first only,
///   n01 same in the second only, n00 different in both.
/// Derived from the table with exact integer arithmetic:
///   n11 = sum_ij C(n_ij,2), n10 = sum_i C(a_i,2) - n11,
///   n01 = sum_j C(b_j,2) - n11, n00 = C(n,2) - n11 - n10 - n01.
struct PairCounts {
    long long n11 = 0, n10 = 0, n01 = 0, n00 = 0;

    long long total() const { return n11 + n10 + n01 + n00; }
    /// M1 and M2: pairs co-clustered in the first/second partition.
    long long m1() const { return n11 + n10; }
    long long m2() const { return n11 + n01; }
    /// Both pair sets coincide, i.e. the groupings are identical.
    bool identical() const { return n10 == 0 && n01 == 0; }

    static PairCounts from(const ContingencyTable& table);
};

}  // namespace netregions
