#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace stochrd {

/// Outcome of an inequality or limit check.
///
/// `worst_margin` is signed: (allowed side) - (measured side), so a check
/// passes when worst_margin >= -tolerance. Sub-checks nest in `checks`.
struct CertificateReport {
    std::string name;
    bool passed = false;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    std::optional<double> location_t;
    std::map<std::string, double> metrics;
    std::vector<CertificateReport> checks;
};

/// {name, pass, worst_margin, tolerance, location_t[, metrics][, checks]}
nlohmann::json to_json(const CertificateReport& report);

}  // namespace stochrd
