#pragma once

#include <string>
#include <vector>

#include "netregions/geometry.hpp"
#include "netregions/partition.hpp"

namespace netregions {

/// Total inter-region shared border length (each unit pair once) and its
/// average over the partition's regions.
struct BorderSummary {
    double total = 0.0;
    double per_region = 0.0;
};

/// Sums shared borders between units in different regions and divides by
/// the region count. Every unit in the table must be covered by the
/// partition; a stray unit is an error, not a silent drop.
BorderSummary avg_border_length(const Partition& partition, const SharedBorderTable& borders);

/// Area, dissolve-free perimeter, and Polsby-Popper compactness of one
/// region. The perimeter identity
///   P = sum of unit perimeters - 2 * sum of region-internal shared borders
/// equals the dissolved outline length without any polygon dissolving.
struct RegionShape {
    int region = -1;
    std::size_t unit_count = 0;
    double area = 0.0;
    double perimeter = 0.0;
    double compactness = 0.0;  // 4*pi*A/P^2, in (0, 1] for valid planar input
};

RegionShape region_shape(const std::vector<std::string>& region_units,
                         const UnitShapeTable& shapes, const SharedBorderTable& borders);

/// Polsby-Popper compactness 4*pi*A/P^2 of one region; multipart regions
/// are scored as-is (areas and perimeters summed).
double compactness(const std::vector<std::string>& region_units, const UnitShapeTable& shapes,
                   const SharedBorderTable& borders);

/// Per-region shapes plus partition-level summaries. Units without geometry
/// are excluded with a warning; a region left without any geometry-bearing
/// unit is skipped in the compactness mean/median (also warned). The border
/// average divides by the partition's full region count.
struct RegionShapeReport {
    std::vector<RegionShape> regions;  // geometry-bearing regions, by label
    int region_count = 0;              // all regions of the partition
    double mean_compactness = 0.0;
    double median_compactness = 0.0;
    BorderSummary border;
    std::vector<std::string> warnings;
};

RegionShapeReport partition_shape_report(const Partition& partition, const UnitShapeTable& shapes,
                                         const SharedBorderTable& borders);

}  // namespace netregions
