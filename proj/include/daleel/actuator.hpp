#pragma once

#include "daleel/portfolio.hpp"

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace daleel::actuator {

struct TriggerEvent {
    enum class Kind { Relearn, Replan, Periodic };
    Kind kind = Kind::Relearn;
    std::string reason;
    std::string at; // ISO timestamp of the observation that triggered it
};

std::string to_string(TriggerEvent::Kind kind);

struct Thresholds {
    double epsilon = 0.2; // relative prediction-error bound
    int window = 5;       // consecutive breaches required to trigger
    std::optional<double> period_s;
};

/// Watches prediction quality and the provider catalog, emitting RELEARN /
/// REPLAN triggers. Single-writer: one owner feeds observations in order.
class Actuator {
public:
    explicit Actuator(Thresholds thresholds = {});

    /// Records a (actual, predicted) pair. Emits RELEARN when the last
    /// `window` relative errors all exceed epsilon; emitting clears the
    /// window, so at least `window` further observations are needed before
    /// the next trigger.
    std::optional<TriggerEvent> observe(double actual_s, double predicted_s, std::string at);

    /// Emits REPLAN when the catalog digest changed since the last call (or
    /// since baseline_portfolio). The first portfolio seen just sets the
    /// baseline.
    std::optional<TriggerEvent> on_portfolio_change(const portfolio::Portfolio& p, std::string at);

    /// Seeds the catalog digest without emitting.
    void baseline_portfolio(const portfolio::Portfolio& p);

    std::size_t window_fill() const { return errors_.size(); }

private:
    Thresholds thresholds_;
    std::deque<double> errors_;
    std::optional<std::map<std::string, std::uint64_t>> portfolio_rows_;
};

/// Appends one NDJSON line: {"kind": ..., "reason": ..., "at": ...}.
void append_event(std::ostream& out, const TriggerEvent& event);

} // namespace daleel::actuator
