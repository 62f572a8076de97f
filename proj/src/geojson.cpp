#include "netregions/geojson.hpp"

#include <fstream>

#include <json.hpp>

namespace netregions {

namespace {

using nlohmann::json;

Ring parse_ring(const json& coords, const std::string& unit, bool hole) {
    if (!coords.is_array() || coords.empty())
        throw ValidationError("unit '" + unit + "': ring is not a coordinate array");
    Ring ring;
    ring.hole = hole;
    ring.points.reserve(coords.size());
    for (const auto& pt : coords) {
        if (!pt.is_array() || pt.size() < 2 || !pt[0].is_number() || !pt[1].is_number())
            throw ValidationError("unit '" + unit + "': malformed coordinate");
        ring.points.push_back(Point{pt[0].get<double>(), pt[1].get<double>()});
    }
    return ring;
}

void parse_polygon(const json& coords, const std::string& unit, std::vector<Ring>& out) {
    if (!coords.is_array() || coords.empty())
        throw ValidationError("unit '" + unit + "': polygon has no rings");
    for (std::size_t r = 0; r < coords.size(); ++r)
        out.push_back(parse_ring(coords[r], unit, r > 0));
}

std::string id_from_property(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    throw ValidationError("feature id property must be a string or integer");
}

}  // namespace

GeoJsonUnits read_geojson_units(const std::string& path, const std::string& id_property) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open geometry file '" + path + "'");

    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError(path + ": invalid JSON (" + e.what() + ")");
    }

    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array())
        throw ValidationError(path + ": expected a GeoJSON FeatureCollection");

    GeoJsonUnits out;
    std::size_t index = 0;
    for (const auto& feature : doc["features"]) {
        const std::string where = path + " feature " + std::to_string(index++);
        if (!feature.is_object() || feature.value("type", "") != "Feature")
            throw ValidationError(where + ": not a Feature");

        const auto& props = feature.contains("properties") ? feature["properties"] : json();
        if (!props.is_object() || !props.contains(id_property))
            throw ValidationError(where + ": missing id property '" + id_property + "'");
        std::string unit;
        try {
            unit = id_from_property(props[id_property]);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        if (unit.empty()) throw ValidationError(where + ": empty unit id");

        if (!feature.contains("geometry") || feature["geometry"].is_null()) {
            out.warnings.push_back("unit '" + unit + "': null geometry, skipped");
            continue;
        }
        const auto& geom = feature["geometry"];
        const std::string type = geom.value("type", "");
        if (!geom.contains("coordinates"))
            throw ValidationError(where + ": geometry has no coordinates");

        GeometryInput input;
        input.unit = unit;
        if (type == "Polygon") {
            parse_polygon(geom["coordinates"], unit, input.rings);
        } else if (type == "MultiPolygon") {
            const auto& polys = geom["coordinates"];
            if (!polys.is_array() || polys.empty())
                throw ValidationError(where + ": MultiPolygon has no polygons");
            for (const auto& poly : polys) parse_polygon(poly, unit, input.rings);
        } else {
            throw ValidationError(where + ": unsupported geometry type '" + type +
                                  "' (expected Polygon or MultiPolygon)");
        }
        out.features.push_back(std::move(input));
    }
    if (out.features.empty())
        throw ValidationError(path + ": no polygon features");
    return out;
}

void write_regions_geojson(const std::string& path, const std::vector<GeometryInput>& features,
                           const Partition& partition, const std::string& id_property) {
    json collection;
    collection["type"] = "FeatureCollection";
    collection["schema_version"] = 1;
    json out_features = json::array();

    for (const auto& f : features) {
        if (!partition.contains(f.unit)) continue;

        // Rebuild the Polygon/MultiPolygon nesting from the hole flags: each
        // exterior ring starts a polygon, following hole rings belong to it.
        std::vector<json> polygons;
        for (const auto& ring : f.rings) {
            json coords = json::array();
            for (const auto& p : ring.points) coords.push_back(json::array({p.x, p.y}));
            if (!ring.hole || polygons.empty())
                polygons.push_back(json::array({std::move(coords)}));
            else
                polygons.back().push_back(std::move(coords));
        }

        json geometry;
        if (polygons.size() == 1) {
            geometry["type"] = "Polygon";
            geometry["coordinates"] = polygons[0];
        } else {
            geometry["type"] = "MultiPolygon";
            geometry["coordinates"] = polygons;
        }

        json feature;
        feature["type"] = "Feature";
        feature["properties"] = {{id_property, f.unit},
                                 {"community_id", partition.label_of(f.unit)}};
        feature["geometry"] = std::move(geometry);
        out_features.push_back(std::move(feature));
    }
    collection["features"] = std::move(out_features);

    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write geometry file '" + path + "'");
    out << collection.dump(2) << '\n';
}

}  // namespace netregions
