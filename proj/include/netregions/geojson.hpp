#pragma once

#include <string>
#include <vector>

#include "netregions/geometry.hpp"
#include "netregions/partition.hpp"

namespace netregions {

struct GeoJsonUnits {
    std::vector<GeometryInput> features;
    std::vector<std::string> warnings;  // features skipped for null geometry
};

/// Reads a GeoJSON FeatureCollection of Polygon/MultiPolygon features.
/// The unit id comes from the named feature property (string or integer).
/// Features with null geometry are skipped with a warning; any other
/// structural problem is an error.
GeoJsonUnits read_geojson_units(const std::string& path,
                                const std::string& id_property = "unit_id");

/// Writes the units as a FeatureCollection with per-feature unit id and
/// community id, for external cartography. Only partition-covered units are
/// written.
void write_regions_geojson(const std::string& path, const std::vector<GeometryInput>& features,
                           const Partition& partition, const std::string& id_property = "unit_id");

}  // namespace netregions
