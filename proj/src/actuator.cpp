#include "daleel/actuator.hpp"

#include "daleel/csv.hpp"
#include "daleel/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace daleel::actuator {

namespace {

constexpr const char* kModule = "actuator";

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t row_digest(const portfolio::InstanceSpec& i) {
    std::string canon = i.name + '|' + i.series + '|' + std::to_string(i.vcpu) + '|' +
                        (i.ecu ? csv::format_double(*i.ecu) : "var") + '|' +
                        csv::format_double(i.ram_gb) + '|' + csv::format_double(i.storage_gb) +
                        '|' + csv::format_double(i.price_per_hour);
    return fnv1a(canon);
}

/// Name -> row digest; keyed by name so reordering the file is not a change.
std::map<std::string, std::uint64_t> digest_rows(const portfolio::Portfolio& p) {
    std::map<std::string, std::uint64_t> rows;
    for (const auto& i : p) rows[i.name] = row_digest(i);
    return rows;
}

} // namespace

std::string to_string(TriggerEvent::Kind kind) {
    switch (kind) {
    case TriggerEvent::Kind::Relearn: return "RELEARN";
    case TriggerEvent::Kind::Replan: return "REPLAN";
    case TriggerEvent::Kind::Periodic: return "PERIODIC";
    }
    return "UNKNOWN";
}

Actuator::Actuator(Thresholds thresholds) : thresholds_(thresholds) {
    if (!(thresholds_.epsilon > 0)) throw Error(kModule, "epsilon must be positive");
    if (thresholds_.window < 1) throw Error(kModule, "window must be >= 1");
}

std::optional<TriggerEvent> Actuator::observe(double actual_s, double predicted_s,
                                              std::string at) {
    if (!(predicted_s > 0)) throw Error(kModule, "predicted time must be positive");
    if (!(actual_s > 0)) throw Error(kModule, "actual time must be positive");

    errors_.push_back(std::abs(actual_s - predicted_s) / actual_s);
    if (errors_.size() > static_cast<std::size_t>(thresholds_.window)) errors_.pop_front();

    if (errors_.size() == static_cast<std::size_t>(thresholds_.window) &&
        std::all_of(errors_.begin(), errors_.end(),
                    [&](double e) { return e > thresholds_.epsilon; })) {
        errors_.clear();
        return TriggerEvent{TriggerEvent::Kind::Relearn,
                            "relative prediction error above " +
                                csv::format_double(thresholds_.epsilon) + " for " +
                                std::to_string(thresholds_.window) + " consecutive runs",
                            std::move(at)};
    }
    return std::nullopt;
}

void Actuator::baseline_portfolio(const portfolio::Portfolio& p) {
    portfolio_rows_ = digest_rows(p);
}

std::optional<TriggerEvent> Actuator::on_portfolio_change(const portfolio::Portfolio& p,
                                                          std::string at) {
    auto rows = digest_rows(p);
    if (!portfolio_rows_) {
        portfolio_rows_ = std::move(rows);
        return std::nullopt;
    }
    if (rows == *portfolio_rows_) return std::nullopt;

    std::string reason = "portfolio changed";
    for (const auto& [name, digest] : *portfolio_rows_) {
        auto it = rows.find(name);
        if (it == rows.end()) {
            reason = "instance removed: " + name;
            break;
        }
        if (it->second != digest) {
            reason = "price or spec changed for " + name;
            break;
        }
    }
    if (reason == "portfolio changed") {
        for (const auto& [name, digest] : rows)
            if (!portfolio_rows_->count(name)) {
                reason = "instance added: " + name;
                break;
            }
    }
    portfolio_rows_ = std::move(rows);
    return TriggerEvent{TriggerEvent::Kind::Replan, reason, std::move(at)};
}

void append_event(std::ostream& out, const TriggerEvent& event) {
    nlohmann::json j{{"kind", to_string(event.kind)}, {"reason", event.reason}, {"at", event.at}};
    out << j.dump() << '\n';
}

} // namespace daleel::actuator
