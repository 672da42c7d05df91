#include "daleel/portfolio.hpp"

#include "daleel/csv.hpp"
#include "daleel/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace daleel::portfolio {

namespace {

constexpr const char* kModule = "portfolio";
constexpr const char* kHeader = "name,series,vcpu,ecu,ram_gb,storage_gb,price_per_hour";

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, "cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, "malformed JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(kModule, "expected a JSON object in " + path.string());
    return j;
}

} // namespace

Portfolio load_portfolio(const std::filesystem::path& path) {
    auto rows = csv::read_table(path, kHeader, kModule);
    if (rows.empty()) throw Error(kModule, "empty portfolio: " + path.string());

    Portfolio out;
    out.reserve(rows.size());
    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string where = "row " + std::to_string(i + 1);

        InstanceSpec spec;
        spec.name = r[0];
        spec.series = r[1];
        if (spec.name.empty()) throw Error(kModule, where + ": empty instance name");
        if (!names.insert(spec.name).second)
            throw Error(kModule, "duplicate instance name '" + spec.name + "'");

        spec.vcpu = csv::parse_int(r[2], kModule, where + " vcpu");
        if (spec.vcpu < 1) throw Error(kModule, where + ": vcpu must be >= 1");

        if (lower(r[3]) == "var") {
            spec.ecu = std::nullopt;
        } else {
            double e = csv::parse_double(r[3], kModule, where + " ecu");
            if (e < 0) throw Error(kModule, where + ": ecu must be nonnegative");
            spec.ecu = e;
        }

        spec.ram_gb = csv::parse_double(r[4], kModule, where + " ram_gb");
        spec.storage_gb = csv::parse_double(r[5], kModule, where + " storage_gb");
        spec.price_per_hour = csv::parse_double(r[6], kModule, where + " price_per_hour");
        if (spec.ram_gb <= 0) throw Error(kModule, where + ": ram_gb must be positive");
        if (spec.storage_gb <= 0) throw Error(kModule, where + ": storage_gb must be positive");
        if (spec.price_per_hour <= 0)
            throw Error(kModule, where + ": price_per_hour must be positive");

        out.push_back(std::move(spec));
    }
    return out;
}

Constraints validate_constraints(Constraints c) {
    if (c.w_time < 0 || c.w_cost < 0)
        throw Error(kModule, "criterion weights must be nonnegative");
    const double sum = c.w_time + c.w_cost;
    if (sum <= 0) throw Error(kModule, "criterion weights must not both be zero");
    c.w_time /= sum;
    c.w_cost /= sum;

    if (c.allowed_days.empty())
        c.allowed_days = {1, 2, 3, 4, 5, 6, 7};
    for (int d : c.allowed_days)
        if (d < 1 || d > 7) throw Error(kModule, "allowed_days entries must be in 1..7");

    if (c.max_execution_time_s && *c.max_execution_time_s <= 0)
        throw Error(kModule, "max_execution_time_s must be positive");
    if (c.budget_usd && *c.budget_usd <= 0)
        throw Error(kModule, "budget_usd must be positive");
    return c;
}

Constraints load_constraints(const std::filesystem::path& path) {
    auto j = read_json(path);
    Constraints c;
    try {
        if (j.contains("max_execution_time_s"))
            c.max_execution_time_s = j.at("max_execution_time_s").get<double>();
        if (j.contains("budget_usd")) c.budget_usd = j.at("budget_usd").get<double>();
        if (j.contains("allowed_days")) {
            const auto& days = j.at("allowed_days");
            if (!days.is_array()) throw Error(kModule, "allowed_days must be an array");
            if (days.empty()) throw Error(kModule, "allowed_days must not be empty");
            for (const auto& d : days) c.allowed_days.insert(d.get<int>());
        }
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            c.w_time = w.value("time", 0.5);
            c.w_cost = w.value("cost", 0.5);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, std::string("bad constraints value: ") + e.what());
    }
    return validate_constraints(std::move(c));
}

Vignette load_vignette(const std::filesystem::path& path) {
    auto j = read_json(path);
    Vignette v;
    v.app_id = j.value("app_id", "");
    if (v.app_id.empty()) throw Error(kModule, "vignette app_id missing or empty");
    if (j.contains("attributes")) {
        const auto& attrs = j.at("attributes");
        if (!attrs.is_object()) throw Error(kModule, "vignette attributes must be an object");
        for (auto it = attrs.begin(); it != attrs.end(); ++it)
            v.attributes.emplace_back(it.key(), it.value().is_string()
                                                    ? it.value().get<std::string>()
                                                    : it.value().dump());
    }
    return v;
}

} // namespace daleel::portfolio
