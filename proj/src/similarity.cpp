#include "netregions/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netregions {

namespace {

using int128 = __int128;

void require_pairs(const ContingencyTable& t, const char* what) {
    if (t.n < 2) throw ValidationError(std::string(what) + " requires n >= 2");
}

}  // namespace

double rand_index(const ContingencyTable& table) {
    require_pairs(table, "rand index");
    const PairCounts pc = PairCounts::from(table);
    return static_cast<double>(pc.n11 + pc.n00) / static_cast<double>(pc.total());
}

double adjusted_rand(const ContingencyTable& table) {
    require_pairs(table, "adjusted rand index");
    const PairCounts pc = PairCounts::from(table);
    const long long m = pc.total();

    // ARI = (n11 - M1 M2 / M) / ((M1+M2)/2 - M1 M2 / M); multiplied through
    // by 2M both sides stay integral, so the only rounding is the final
    // division.
    const int128 num = int128{2} * (int128{pc.n11} * m - int128{pc.m1()} * pc.m2());
    const int128 den =
        int128{pc.m1() + pc.m2()} * m - int128{2} * int128{pc.m1()} * pc.m2();
    if (den == 0) {
        if (pc.identical()) return 1.0;  // both trivial, same grouping
        throw ComputationError("adjusted rand index is degenerate for trivial partitions");
    }
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

double jaccard(const ContingencyTable& table) {
    require_pairs(table, "jaccard index");
    const PairCounts pc = PairCounts::from(table);
    const long long den = pc.n11 + pc.n10 + pc.n01;
    if (den == 0) return 1.0;  // both all-singletons: identical groupings
    return static_cast<double>(pc.n11) / static_cast<double>(den);
}

NmiVariant nmi_variant_from_string(const std::string& s) {
    if (s == "sum") return NmiVariant::Sum;
    if (s == "max") return NmiVariant::Max;
    if (s == "sqrt") return NmiVariant::Sqrt;
    throw ValidationError("unknown NMI variant '" + s + "' (expected sum, max, or sqrt)");
}

std::string to_string(NmiVariant variant) {
    switch (variant) {
        case NmiVariant::Sum: return "sum";
        case NmiVariant::Max: return "max";
        case NmiVariant::Sqrt: return "sqrt";
    }
    return "sum";
}

double nmi(const ContingencyTable& table, NmiVariant variant) {
    if (table.n < 1) throw ValidationError("nmi requires a non-empty table");
    const double n = static_cast<double>(table.n);

    double hx = 0.0, hy = 0.0, mi = 0.0;
    for (long long s : table.row_sums)
        if (s > 0) hx -= s / n * std::log(s / n);
    for (long long s : table.col_sums)
        if (s > 0) hy -= s / n * std::log(s / n);
    for (std::size_t i = 0; i < table.k1(); ++i)
        for (std::size_t j = 0; j < table.k2(); ++j) {
            const long long c = table.at(i, j);
            if (c == 0) continue;
            mi += c / n *
                  std::log(static_cast<double>(c) * n /
                           (static_cast<double>(table.row_sums[i]) * table.col_sums[j]));
        }

    double den = 0.0;
    switch (variant) {
        case NmiVariant::Sum: den = 0.5 * (hx + hy); break;
        case NmiVariant::Max: den = std::max(hx, hy); break;
        case NmiVariant::Sqrt: den = std::sqrt(hx * hy); break;
    }
    if (den == 0.0) {
        // hx = hy = 0: both all-in-one, identical trivial partitions.
        // One-sided zero entropy (sqrt variant) forces I = 0: no shared info.
        return (hx == 0.0 && hy == 0.0) ? 1.0 : 0.0;
    }
    return mi / den;
}

ZRandMoments z_rand_null_moments(const ContingencyTable& table) {
    if (table.n < 4)
        throw ValidationError("z-rand requires n >= 4 (the null variance divides by n-3)");

    const PairCounts pc = PairCounts::from(table);
    const long long n = table.n;
    const long long m = pc.total();
    const long long m1 = pc.m1();
    const long long m2 = pc.m2();

    // T2 counts ordered pairs of co-clustered pairs sharing exactly one node:
    // s(s-1)(s-2) per community. Q2 = M^2 - M - T2 counts ordered pairs of
    // disjoint co-clustered pairs.
    long long t2x = 0, t2y = 0;
    for (long long s : table.row_sums) t2x += s * (s - 1) * (s - 2);
    for (long long s : table.col_sums) t2y += s * (s - 1) * (s - 2);
    const int128 q2x = int128{m1} * m1 - m1 - t2x;
    const int128 q2y = int128{m2} * m2 - m2 - t2y;

    const long double p3 =
        static_cast<long double>(n) * (n - 1) * (n - 2);
    const long double p4 = p3 * (n - 3);

    const long double mean = static_cast<long double>(m1) * m2 / m;
    const long double second_moment =
        mean + static_cast<long double>(t2x) * t2y / p3 +
        4.0L * static_cast<long double>(q2x) * static_cast<long double>(q2y) / p4;
    const long double variance = second_moment - mean * mean;

    ZRandMoments out;
    out.mean = static_cast<double>(mean);
    // Exact inputs keep the relative noise of this assembly far below 1e-12;
    // anything at or under 1e-10 of the second moment is a true zero
    // (w deterministic under the null), not a small variance.
    const long double floor = 1e-10L * std::max(second_moment, 1.0L);
    out.variance = variance <= floor ? 0.0 : static_cast<double>(variance);
    return out;
}

double z_rand(const ContingencyTable& table) {
    const ZRandMoments mom = z_rand_null_moments(table);
    if (mom.variance <= 0.0)
        throw ComputationError(
            "degenerate null model: the co-clustered pair count is deterministic under "
            "size-preserving permutations");
    const PairCounts pc = PairCounts::from(table);
    return (static_cast<double>(pc.n11) - mom.mean) / std::sqrt(mom.variance);
}

SimilarityResult compare_partitions(const Partition& first, const Partition& second,
                                    NmiVariant variant) {
    const ContingencyTable table = ContingencyTable::from(first, second);
    const PairCounts pc = PairCounts::from(table);

    SimilarityResult r;
    r.n = table.n;
    r.k_first = first.num_communities();
    r.k_second = second.num_communities();
    r.nmi_variant = variant;
    r.identical = pc.identical();

    r.rand = rand_index(table);
    r.jaccard = jaccard(table);
    if (pc.n11 + pc.n10 + pc.n01 == 0)
        r.notes.push_back("jaccard: both partitions all-singletons, defined as 1.0");
    r.nmi = nmi(table, variant);
    if (r.k_first == 1 && r.k_second == 1)
        r.notes.push_back("nmi: both partitions all-in-one, defined as 1.0");
    r.adjusted_rand = adjusted_rand(table);  // trivial+identical yields 1.0
    if ((pc.m1() == 0 && pc.m2() == 0) || (pc.m1() == pc.total() && pc.m2() == pc.total()))
        r.notes.push_back("adjusted_rand: both partitions trivial, defined as 1.0");

    try {
        r.z_rand = z_rand(table);
    } catch (const ComputationError& e) {
        r.z_rand = std::numeric_limits<double>::quiet_NaN();
        r.z_rand_degenerate = true;
        r.notes.push_back(std::string("z_rand: ") + e.what());
    }
    return r;
}

}  // namespace netregions
