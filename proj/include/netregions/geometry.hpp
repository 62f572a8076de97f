#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netregions/common.hpp"

namespace netregions {

/// Planar projected coordinates in one consistent length unit. No geodesy
/// here: reprojection is an upstream responsibility.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Closed coordinate ring (first point equals last, at least 4 points).
/// Hole rings carve interior area out but still contribute perimeter.
struct Ring {
    std::vector<Point> points;
    bool hole = false;
};

/// One unit's raw polygon rings as read from the geometry source, before
/// area/perimeter/border preprocessing.
struct GeometryInput {
    std::string unit;
    std::vector<Ring> rings;
};

/// Preprocessed unit geometry: shoelace area (holes subtracted) and the
/// summed segment-length perimeter of every ring.
struct UnitGeometry {
    std::string unit;
    std::vector<Ring> rings;
    double area = 0.0;
    double perimeter = 0.0;
};

/// Shared boundary length per unordered unit pair. Lengths accumulate over
/// all coincident boundary segments of a pair.
class SharedBorderTable {
public:
    using Key = std::pair<std::string, std::string>;

    void add(const std::string& a, const std::string& b, double length);
    /// 0.0 when the pair shares no boundary.
    double between(const std::string& a, const std::string& b) const;

    const std::map<Key, double>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

private:
    std::map<Key, double> entries_;
};

struct GeometryOptions {
    /// Endpoint quantization step for boundary matching, in coordinate
    /// units. Neighboring polygons must share vertices up to this snap.
    double snap_tolerance = 1e-6;
};

struct GeometryResult {
    std::vector<UnitGeometry> units;  // sorted by unit id
    SharedBorderTable borders;
    std::vector<std::string> warnings;
};

/// Computes areas, perimeters, and the shared-border table.
///
/// Shared borders come from canonical-segment hashing: every boundary
/// segment, endpoints quantized to the snap tolerance, that appears in
/// exactly two units' rings contributes its (snapped) length to that pair.
/// A segment claimed by more than two units is a topology error, reported
/// with its coordinates. Near-coincident segments that fail to match at the
/// snap tolerance produce a warning, as does a unit whose shared lengths
/// exceed its own perimeter.
GeometryResult preprocess_geometry(const std::vector<GeometryInput>& features,
                                   const GeometryOptions& options = {});

/// Area/perimeter pair for metric computation; the geometry-free adjacency
/// route supplies these directly from CSV.
struct UnitShape {
    double area = 0.0;
    double perimeter = 0.0;
};

using UnitShapeTable = std::map<std::string, UnitShape>;

UnitShapeTable shape_table(const std::vector<UnitGeometry>& units);

/// CSV (unit_a, unit_b, shared_length): duplicate pairs, self pairs, and
/// non-positive lengths are errors.
SharedBorderTable load_border_csv(const std::string& path);
void save_border_csv(const SharedBorderTable& borders, const std::string& path);

/// CSV (unit_id, area, perimeter): duplicates and non-positive values are
/// errors.
UnitShapeTable load_unit_metrics_csv(const std::string& path);
void save_unit_metrics_csv(const UnitShapeTable& table, const std::string& path);

}  // namespace netregions
