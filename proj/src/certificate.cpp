#include "stochrd/certificate.hpp"

#include <cmath>

namespace stochrd {

namespace {

// JSON has no representation for inf/nan.
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json to_json(const CertificateReport& report) {
    nlohmann::json j;
    j["name"] = report.name;
    j["pass"] = report.passed;
    j["worst_margin"] = number(report.worst_margin);
    j["tolerance"] = number(report.tolerance);
    j["location_t"] = report.location_t ? number(*report.location_t) : nlohmann::json(nullptr);
    if (!report.metrics.empty()) {
        nlohmann::json m = nlohmann::json::object();
        for (const auto& [k, v] : report.metrics) m[k] = number(v);
        j["metrics"] = m;
    }
    if (!report.checks.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : report.checks) arr.push_back(to_json(c));
        j["checks"] = arr;
    }
    return j;
}

}  // namespace stochrd
