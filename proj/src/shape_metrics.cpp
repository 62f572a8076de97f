#include "netregions/shape_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace netregions {

BorderSummary avg_border_length(const Partition& partition, const SharedBorderTable& borders) {
    KahanSum total;
    for (const auto& [key, len] : borders.entries()) {
        // label_of throws for units the partition does not cover
        if (partition.label_of(key.first) != partition.label_of(key.second)) total.add(len);
    }
    BorderSummary s;
    s.total = total.value();
    s.per_region = s.total / static_cast<double>(partition.num_communities());
    return s;
}

RegionShape region_shape(const std::vector<std::string>& region_units,
                         const UnitShapeTable& shapes, const SharedBorderTable& borders) {
    if (region_units.empty()) throw ValidationError("empty region");

    RegionShape r;
    r.unit_count = region_units.size();
    KahanSum area;
    KahanSum perimeter;
    for (const auto& unit : region_units) {
        auto it = shapes.find(unit);
        if (it == shapes.end())
            throw ValidationError("no geometry for unit '" + unit + "'");
        area.add(it->second.area);
        perimeter.add(it->second.perimeter);
    }

    // Internal borders disappear from the dissolved outline; each one was
    // counted once in both members' perimeters.
    KahanSum internal;
    if (region_units.size() > 1) {
        std::vector<std::string> sorted_units(region_units);
        std::sort(sorted_units.begin(), sorted_units.end());
        for (const auto& [key, len] : borders.entries()) {
            if (std::binary_search(sorted_units.begin(), sorted_units.end(), key.first) &&
                std::binary_search(sorted_units.begin(), sorted_units.end(), key.second))
                internal.add(len);
        }
    }

    r.area = area.value();
    r.perimeter = perimeter.value() - 2.0 * internal.value();
    if (!(r.area > 0.0))
        throw ComputationError("region has non-positive total area");
    if (!(r.perimeter > 0.0))
        throw ComputationError(
            "region has non-positive dissolved perimeter: shared borders exceed unit perimeters");
    r.compactness = 4.0 * std::numbers::pi * r.area / (r.perimeter * r.perimeter);
    return r;
}

double compactness(const std::vector<std::string>& region_units, const UnitShapeTable& shapes,
                   const SharedBorderTable& borders) {
    return region_shape(region_units, shapes, borders).compactness;
}

RegionShapeReport partition_shape_report(const Partition& partition, const UnitShapeTable& shapes,
                                         const SharedBorderTable& borders) {
    RegionShapeReport report;
    report.region_count = partition.num_communities();
    report.border = avg_border_length(partition, borders);

    std::map<int, std::vector<std::string>> by_region;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        const std::string& unit = partition.nodes()[i];
        if (!shapes.count(unit)) {
            report.warnings.push_back("unit '" + unit + "' has no geometry; excluded from "
                                      "compactness metrics");
            continue;
        }
        by_region[partition.label_at(i)].push_back(unit);
    }

    for (int c = 0; c < partition.num_communities(); ++c) {
        auto it = by_region.find(c);
        if (it == by_region.end()) {
            report.warnings.push_back("region " + std::to_string(c) +
                                      " has no geometry-bearing units; excluded from "
                                      "compactness metrics");
            continue;
        }
        RegionShape shape = region_shape(it->second, shapes, borders);
        shape.region = c;
        report.regions.push_back(std::move(shape));
    }

    if (!report.regions.empty()) {
        std::vector<double> values;
        values.reserve(report.regions.size());
        KahanSum mean;
        for (const auto& r : report.regions) {
            values.push_back(r.compactness);
            mean.add(r.compactness);
        }
        report.mean_compactness = mean.value() / static_cast<double>(values.size());
        std::sort(values.begin(), values.end());
        const std::size_t mid = values.size() / 2;
        report.median_compactness = values.size() % 2 == 1
                                        ? values[mid]
                                        : (values[mid - 1] + values[mid]) / 2.0;
    }
    return report;
}

}  // namespace netregions
