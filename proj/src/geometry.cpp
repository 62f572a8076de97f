#include "netregions/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace netregions {

void SharedBorderTable::add(const std::string& a, const std::string& b, double length) {
    if (a == b) throw ValidationError("shared border between a unit and itself: '" + a + "'");
    if (!(length > 0.0))
        throw ValidationError("non-positive shared border length for pair (" + a + ", " + b + ")");
    Key key = a < b ? Key{a, b} : Key{b, a};
    entries_[key] += length;
}

double SharedBorderTable::between(const std::string& a, const std::string& b) const {
    Key key = a < b ? Key{a, b} : Key{b, a};
    auto it = entries_.find(key);
    return it == entries_.end() ? 0.0 : it->second;
}

namespace {

double ring_area(const Ring& ring) {
    KahanSum twice;
    for (std::size_t i = 0; i + 1 < ring.points.size(); ++i) {
        const Point& p = ring.points[i];
        const Point& q = ring.points[i + 1];
        twice.add(p.x * q.y - q.x * p.y);
    }
    return std::abs(twice.value()) / 2.0;
}

double ring_perimeter(const Ring& ring) {
    KahanSum sum;
    for (std::size_t i = 0; i + 1 < ring.points.size(); ++i) {
        const Point& p = ring.points[i];
        const Point& q = ring.points[i + 1];
        sum.add(std::hypot(q.x - p.x, q.y - p.y));
    }
    return sum.value();
}

using Quantized = std::array<std::int64_t, 2>;
using SegmentKey = std::array<std::int64_t, 4>;

Quantized quantize(const Point& p, double snap) {
    return {static_cast<std::int64_t>(std::llround(p.x / snap)),
            static_cast<std::int64_t>(std::llround(p.y / snap))};
}

SegmentKey segment_key(const Quantized& a, const Quantized& b) {
    if (a < b) return {a[0], a[1], b[0], b[1]};
    return {b[0], b[1], a[0], a[1]};
}

std::string describe_segment(const SegmentKey& key, double snap) {
    std::ostringstream out;
    out << "(" << format_sig12(key[0] * snap) << ", " << format_sig12(key[1] * snap) << ")-("
        << format_sig12(key[2] * snap) << ", " << format_sig12(key[3] * snap) << ")";
    return out.str();
}

double snapped_length(const SegmentKey& key, double snap) {
    const double dx = static_cast<double>(key[2] - key[0]);
    const double dy = static_cast<double>(key[3] - key[1]);
    return std::hypot(dx, dy) * snap;
}

}  // namespace

GeometryResult preprocess_geometry(const std::vector<GeometryInput>& features,
                                   const GeometryOptions& options) {
    if (!(options.snap_tolerance > 0.0))
        throw ValidationError("snap tolerance must be positive");
    if (features.empty()) throw ValidationError("no geometry features");
    const double snap = options.snap_tolerance;

    GeometryResult result;
    result.units.reserve(features.size());

    std::unordered_set<std::string> seen;
    for (const auto& f : features) {
        if (f.unit.empty()) throw ValidationError("geometry feature with empty unit id");
        if (!seen.insert(f.unit).second)
            throw ValidationError("duplicate unit id in geometry: '" + f.unit + "'");
        if (f.rings.empty())
            throw ValidationError("unit '" + f.unit + "' has no rings");

        UnitGeometry g;
        g.unit = f.unit;
        g.rings = f.rings;
        KahanSum area;
        KahanSum perimeter;
        for (const auto& ring : g.rings) {
            if (ring.points.size() < 4)
                throw ValidationError("unit '" + f.unit + "': ring with fewer than 4 points");
            if (quantize(ring.points.front(), snap) != quantize(ring.points.back(), snap))
                throw ValidationError("unit '" + f.unit + "': unclosed ring (first point (" +
                                      format_sig12(ring.points.front().x) + ", " +
                                      format_sig12(ring.points.front().y) +
                                      ") does not match last)");
            area.add((ring.hole ? -1.0 : 1.0) * ring_area(ring));
            perimeter.add(ring_perimeter(ring));
        }
        g.area = area.value();
        g.perimeter = perimeter.value();
        if (!(g.area > 0.0))
            throw ValidationError("unit '" + f.unit + "': non-positive area " +
                                  format_sig12(g.area) + " after hole subtraction");
        result.units.push_back(std::move(g));
    }
    std::sort(result.units.begin(), result.units.end(),
              [](const UnitGeometry& a, const UnitGeometry& b) { return a.unit < b.unit; });

    // Canonical-segment hashing. Values hold the distinct units that claim a
    // snapped segment; two claimants make a shared border, more is broken
    // topology. A coarser second lattice catches near misses for diagnostics.
    std::map<SegmentKey, std::vector<std::uint32_t>> segments;
    const double coarse_snap = snap * 8.0;
    std::map<SegmentKey, std::vector<std::uint32_t>> coarse;

    for (std::uint32_t u = 0; u < result.units.size(); ++u) {
        for (const auto& ring : result.units[u].rings) {
            for (std::size_t i = 0; i + 1 < ring.points.size(); ++i) {
                const Quantized a = quantize(ring.points[i], snap);
                const Quantized b = quantize(ring.points[i + 1], snap);
                if (a == b) continue;  // sub-snap sliver
                segments[segment_key(a, b)].push_back(u);

                const Quantized ca = quantize(ring.points[i], coarse_snap);
                const Quantized cb = quantize(ring.points[i + 1], coarse_snap);
                if (ca == cb) continue;
                auto& claims = coarse[segment_key(ca, cb)];
                if (std::find(claims.begin(), claims.end(), u) == claims.end())
                    claims.push_back(u);
            }
        }
    }

    for (auto& [key, claims] : segments) {
        std::sort(claims.begin(), claims.end());
        const auto distinct = static_cast<std::size_t>(
            std::unique(claims.begin(), claims.end()) - claims.begin());
        if (distinct > 2) {
            std::string names;
            for (std::size_t i = 0; i < distinct; ++i)
                names += (i ? ", " : "") + result.units[claims[i]].unit;
            throw ValidationError("boundary segment " + describe_segment(key, snap) +
                                  " is shared by " + std::to_string(distinct) +
                                  " units (" + names + "): broken topology");
        }
        if (distinct == 2 && claims.size() > 2) {
            throw ValidationError("boundary segment " + describe_segment(key, snap) +
                                  " is claimed more than twice: broken topology");
        }
        if (distinct == 1 && claims.size() > 1) {
            result.warnings.push_back("unit '" + result.units[claims[0]].unit +
                                      "' touches itself along segment " +
                                      describe_segment(key, snap));
            continue;
        }
        if (distinct == 2)
            result.borders.add(result.units[claims[0]].unit, result.units[claims[1]].unit,
                               snapped_length(key, snap));
    }

    // Near-miss diagnostics: units that coincide on the coarse lattice but
    // share nothing at snap resolution are almost certainly misaligned input.
    std::set<SharedBorderTable::Key> flagged;
    for (const auto& [key, claims] : coarse) {
        if (claims.size() < 2) continue;
        for (std::size_t i = 0; i < claims.size(); ++i)
            for (std::size_t j = i + 1; j < claims.size(); ++j) {
                const auto& ua = result.units[claims[i]].unit;
                const auto& ub = result.units[claims[j]].unit;
                if (result.borders.between(ua, ub) > 0.0) continue;
                auto pair_key = ua < ub ? SharedBorderTable::Key{ua, ub}
                                        : SharedBorderTable::Key{ub, ua};
                if (!flagged.insert(pair_key).second) continue;
                result.warnings.push_back(
                    "units '" + pair_key.first + "' and '" + pair_key.second +
                    "' have near-coincident boundaries that do not match at snap tolerance " +
                    format_sig12(snap) + " (near " + describe_segment(key, coarse_snap) + ")");
            }
    }

    // A unit's shared lengths can exceed its perimeter only through snapping
    // artifacts or broken input; say so rather than let metrics go quietly
    // negative.
    std::map<std::string, double> shared_sum;
    for (const auto& [key, len] : result.borders.entries()) {
        shared_sum[key.first] += len;
        shared_sum[key.second] += len;
    }
    for (const auto& g : result.units) {
        auto it = shared_sum.find(g.unit);
        if (it == shared_sum.end()) continue;
        const double tol = 1e-9 * std::max(1.0, g.perimeter) + 8.0 * snap;
        if (it->second > g.perimeter + tol)
            result.warnings.push_back("unit '" + g.unit + "': shared borders sum to " +
                                      format_sig12(it->second) + ", exceeding its perimeter " +
                                      format_sig12(g.perimeter));
    }

    return result;
}

UnitShapeTable shape_table(const std::vector<UnitGeometry>& units) {
    UnitShapeTable table;
    for (const auto& g : units) table[g.unit] = UnitShape{g.area, g.perimeter};
    return table;
}

namespace {

double parse_positive(const std::string& field, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size() || !(v > 0.0) || !std::isfinite(v))
            throw ValidationError(context + ": expected a positive number, got '" + field + "'");
        return v;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError(context + ": expected a positive number, got '" + field + "'");
    }
}

}  // namespace

SharedBorderTable load_border_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open border file '" + path + "'");
    SharedBorderTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_line(t, ',');
        if (fields.size() < 3)
            throw ValidationError(path + " line " + std::to_string(line_no) +
                                  ": expected unit_a,unit_b,shared_length");
        const std::string a = trim(fields[0]);
        const std::string b = trim(fields[1]);
        const std::string context = path + " line " + std::to_string(line_no);
        if (a.empty() || b.empty()) throw ValidationError(context + ": empty unit id");
        if (table.between(a, b) > 0.0)
            throw ValidationError(context + ": duplicate pair (" + a + ", " + b + ")");
        table.add(a, b, parse_positive(trim(fields[2]), context));
    }
    if (!header_seen) throw ValidationError(path + ": empty border file (header row required)");
    return table;
}

void save_border_csv(const SharedBorderTable& borders, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write border file '" + path + "'");
    out << "# schema_version: 1\n";
    out << "unit_a,unit_b,shared_length\n";
    for (const auto& [key, len] : borders.entries())
        out << key.first << ',' << key.second << ',' << format_sig12(len) << '\n';
}

UnitShapeTable load_unit_metrics_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open unit metrics file '" + path + "'");
    UnitShapeTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split_line(t, ',');
        if (fields.size() < 3)
            throw ValidationError(path + " line " + std::to_string(line_no) +
                                  ": expected unit_id,area,perimeter");
        const std::string unit = trim(fields[0]);
        const std::string context = path + " line " + std::to_string(line_no);
        if (unit.empty()) throw ValidationError(context + ": empty unit id");
        if (table.count(unit))
            throw ValidationError(context + ": duplicate unit '" + unit + "'");
        table[unit] = UnitShape{parse_positive(trim(fields[1]), context),
                                parse_positive(trim(fields[2]), context)};
    }
    if (!header_seen)
        throw ValidationError(path + ": empty unit metrics file (header row required)");
    return table;
}

void save_unit_metrics_csv(const UnitShapeTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write unit metrics file '" + path + "'");
    out << "# schema_version: 1\n";
    out << "unit_id,area,perimeter\n";
    for (const auto& [unit, shape] : table)
        out << unit << ',' << format_sig12(shape.area) << ',' << format_sig12(shape.perimeter)
            << '\n';
}

}  // namespace netregions
