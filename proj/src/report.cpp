#include "netregions/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "netregions/common.hpp"
#include "netregions/version.hpp"

namespace netregions {

namespace {

nlohmann::json period_json(const PeriodReport& p) {
    nlohmann::json j{{"label", p.label},
                     {"n_nodes", p.n_nodes},
                     {"n_edges", p.n_edges},
                     {"total_weight", p.total_weight},
                     {"region_count", p.region_count},
                     {"modularity", p.modularity}};
    if (p.has_spatial) {
        j["spatial"] = {{"mean_compactness", p.mean_compactness},
                        {"median_compactness", p.median_compactness},
                        {"avg_border_per_region", p.avg_border_per_region},
                        {"warnings", p.warnings}};
    } else {
        j["spatial"] = nullptr;
    }
    return j;
}

}  // namespace

std::string report_json(const ComparisonReport& report) {
    const SimilarityResult& s = report.cross.similarity;
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["metadata"] = {{"network", report.meta.network},
                     {"seed", report.meta.seed},
                     {"restarts", report.meta.restarts},
                     {"resolution", report.meta.resolution},
                     {"node_order", report.meta.node_order},
                     {"nmi_variant", report.meta.nmi_variant},
                     {"software_version", report.meta.software_version},
                     {"generated_at", report.meta.generated_at}};
    j["periods"] = {{"pre", period_json(report.pre)}, {"post", period_json(report.post)}};
    j["comparison"] = {{"n_common_nodes", s.n},
                       {"k_pre", s.k_first},
                       {"k_post", s.k_second},
                       {"rand", s.rand},
                       {"adjusted_rand", s.adjusted_rand},
                       {"jaccard", s.jaccard},
                       {"nmi", s.nmi},
                       {"z_rand", s.z_rand},  // NaN serializes as null
                       {"identical", s.identical},
                       {"z_rand_degenerate", s.z_rand_degenerate},
                       {"notes", s.notes},
                       {"dropped_nodes",
                        {{"pre_only", report.cross.dropped_pre},
                         {"post_only", report.cross.dropped_post}}}};
    return j.dump(2) + "\n";
}

void save_report_json(const ComparisonReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write report to '" + path + "'");
    out << report_json(report);
}

std::string report_csv(const ComparisonReport& report) {
    const SimilarityResult& s = report.cross.similarity;
    std::ostringstream out;
    out << "# schema_version: " << kSchemaVersion << "\n";
    out << "network,pre_label,post_label,n_common,k_pre,k_post,"
           "z_rand,adjusted_rand,jaccard,nmi,rand\n";
    out << report.meta.network << ',' << report.pre.label << ',' << report.post.label << ','
        << s.n << ',' << s.k_first << ',' << s.k_second << ','
        << (std::isnan(s.z_rand) ? std::string() : format_sig12(s.z_rand)) << ','
        << format_sig12(s.adjusted_rand) << ',' << format_sig12(s.jaccard) << ','
        << format_sig12(s.nmi) << ',' << format_sig12(s.rand) << "\n";
    return out.str();
}

void save_report_csv(const ComparisonReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write report to '" + path + "'");
    out << report_csv(report);
}

std::string current_timestamp_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace netregions
