#pragma once

#include <string>
#include <vector>

#include "netregions/contingency.hpp"

namespace netregions {

/// Rand index (n11+n00)/C(n,2). Requires n >= 2.
double rand_index(const ContingencyTable& table);

/// Hubert-Arabie adjusted Rand index,
///   ARI = (n11 - E) / ((M1+M2)/2 - E),  E = M1 M2 / C(n,2),
/// evaluated as one exact 128-bit rational before the final division.
/// A zero denominator means both partitions are trivial (all-singletons or
/// all-in-one); that is 1.0 when they are identical, otherwise an error.
double adjusted_rand(const ContingencyTable& table);

/// Pair-count Jaccard n11/(n11+n10+n01); 1.0 when both partitions are
/// all-singletons (identical, so the agreement is perfect by convention).
double jaccard(const ContingencyTable& table);

/// NMI normalization variant. Sum is 2I/(Hx+Hy), the symmetric default.
enum class NmiVariant { Sum, Max, Sqrt };

NmiVariant nmi_variant_from_string(const std::string& s);
std::string to_string(NmiVariant variant);

/// Normalized mutual information with plug-in entropies, natural log,
/// 0 log 0 = 0. Both partitions all-in-one normalizes to 1.0 (identical
/// trivial partitions); one-sided trivial partitions give 0 (I = 0).
double nmi(const ContingencyTable& table, NmiVariant variant = NmiVariant::Sum);

/// Null-model moments of w = n11 when the second partition's labels are
/// uniformly permuted with community sizes fixed (Traud et al. 2011):
///   mean      = M1 M2 / M
///   variance  = M1 M2/M + T2x T2y / (n(n-1)(n-2))
///               + 4 Q2x Q2y / (n(n-1)(n-2)(n-3)) - mean^2
/// with T2 = sum_s s(s-1)(s-2) over community sizes and Q2 = M^2-ish
/// complement counts (see the implementation). Requires n >= 4.
struct ZRandMoments {
    double mean = 0.0;
    double variance = 0.0;
};

ZRandMoments z_rand_null_moments(const ContingencyTable& table);

/// z-Rand score z = (n11 - mean)/sqrt(variance). Throws ComputationError
/// "degenerate null model" when the variance vanishes (w deterministic,
/// e.g. one partition all-in-one).
double z_rand(const ContingencyTable& table);

/// All five indices of one comparison plus degeneracy bookkeeping.
/// z_rand is NaN when the null model is degenerate; every applied
/// degenerate convention is recorded in `notes`.
struct SimilarityResult {
    long long n = 0;
    int k_first = 0;
    int k_second = 0;
    double rand = 0.0;
    double adjusted_rand = 0.0;
    double jaccard = 0.0;
    double nmi = 0.0;
    double z_rand = 0.0;
    NmiVariant nmi_variant = NmiVariant::Sum;
    bool identical = false;
    bool z_rand_degenerate = false;
    std::vector<std::string> notes;
};

SimilarityResult compare_partitions(const Partition& first, const Partition& second,
                                    NmiVariant variant = NmiVariant::Sum);

}  // namespace netregions
