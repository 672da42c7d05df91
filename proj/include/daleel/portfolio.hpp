#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace daleel::portfolio {

/// One row of the provider's instance-type catalog.
/// `ecu` is empty for burstable types whose compute rating is variable.
struct InstanceSpec {
    std::string name;
    std::string series;
    int vcpu = 0;
    std::optional<double> ecu;
    double ram_gb = 0.0;
    double storage_gb = 0.0;
    double price_per_hour = 0.0;
};

using Portfolio = std::vector<InstanceSpec>;

/// Key-value sketch of an application's computational needs.
struct Vignette {
    std::string app_id;
    std::vector<std::pair<std::string, std::string>> attributes;
};

/// Customer constraints for planning. Days use ISO numbering, 1 = Monday.
/// Budget is per workload run; prices are hourly and the planner converts
/// through billing granularity.
struct Constraints {
    std::optional<double> max_execution_time_s;
    std::optional<double> budget_usd;
    std::set<int> allowed_days;   // empty means "not set yet"
    double w_time = 0.5;
    double w_cost = 0.5;
};

/// Loads and validates a catalog CSV
/// (`name,series,vcpu,ecu,ram_gb,storage_gb,price_per_hour`; `ecu` is a
/// decimal or the literal `var`). Row order is preserved.
Portfolio load_portfolio(const std::filesystem::path& path);

/// Normalizes constraints: weights rescaled to sum to 1, allowed_days
/// defaulted to all seven. Idempotent. Throws if both weights are zero.
Constraints validate_constraints(Constraints c);

/// Reads the constraints JSON object and validates it.
Constraints load_constraints(const std::filesystem::path& path);

/// Reads `app_id` + `attributes` from the same JSON file.
Vignette load_vignette(const std::filesystem::path& path);

} // namespace daleel::portfolio
