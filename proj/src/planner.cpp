#include "daleel/planner.hpp"

#include "daleel/csv.hpp"
#include "daleel/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>

namespace daleel::planner {

namespace {

constexpr const char* kModule = "planner";

bool within_time(const Candidate& c, const portfolio::Constraints& k) {
    return !k.max_execution_time_s || c.predicted_time_s <= *k.max_execution_time_s;
}

bool within_budget(const Candidate& c, const portfolio::Constraints& k) {
    return !k.budget_usd || c.billed_cost_usd <= *k.budget_usd;
}

} // namespace

double billed_cost(double predicted_time_s, double price_per_hour, const BillingPolicy& billing) {
    const double units = std::ceil(predicted_time_s / static_cast<double>(billing.granularity_s));
    return price_per_hour * units;
}

std::vector<Candidate> enumerate_candidates(const portfolio::Portfolio& portfolio,
                                            const portfolio::Constraints& constraints,
                                            const regress::FittedModel& model,
                                            const BillingPolicy& billing) {
    if (portfolio.empty()) throw Error(kModule, "portfolio is empty");
    if (billing.granularity_s < 1) throw Error(kModule, "billing granularity must be positive");

    std::vector<Candidate> out;
    out.reserve(portfolio.size() * constraints.allowed_days.size());
    for (const auto& inst : portfolio) {
        for (int day : constraints.allowed_days) {
            Candidate c;
            c.instance = inst;
            c.day = day;
            c.predicted_time_s = regress::predict(model, inst.ram_gb, inst.vcpu, day);
            if (!(c.predicted_time_s > 0)) {
                std::cerr << "[WARN] planner: model predicts nonpositive time for " << inst.name
                          << " on day " << day << "; candidate excluded\n";
                continue;
            }
            c.billed_cost_usd = billed_cost(c.predicted_time_s, inst.price_per_hour, billing);
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<Candidate> rank(std::vector<Candidate> candidates,
                            const portfolio::Constraints& constraints, ScoringMethod method) {
    if (method != ScoringMethod::WeightedSum)
        throw Error(kModule, "scoring method not implemented");
    if (candidates.empty()) throw Error(kModule, "no candidates to rank");

    std::vector<Candidate> survivors;
    survivors.reserve(candidates.size());
    std::size_t pass_time = 0, pass_budget = 0;
    for (auto& c : candidates) {
        const bool t = within_time(c, constraints);
        const bool b = within_budget(c, constraints);
        pass_time += t;
        pass_budget += b;
        if (t && b) survivors.push_back(std::move(c));
    }
    if (survivors.empty()) {
        std::string binding;
        if (pass_time == 0) binding = "max_execution_time_s";
        if (pass_budget == 0) binding += binding.empty() ? "budget_usd" : " and budget_usd";
        if (binding.empty()) binding = "max_execution_time_s and budget_usd jointly";
        throw Error(kModule, "no feasible candidate (binding constraint: " + binding + ")");
    }

    auto min_max = [&](auto field) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& c : survivors) {
            lo = std::min(lo, field(c));
            hi = std::max(hi, field(c));
        }
        return std::pair{lo, hi};
    };
    auto time_of = [](const Candidate& c) { return c.predicted_time_s; };
    auto cost_of = [](const Candidate& c) { return c.billed_cost_usd; };
    const auto [t_lo, t_hi] = min_max(time_of);
    const auto [c_lo, c_hi] = min_max(cost_of);

    // constant criterion -> normalized 0 for everyone (no 0/0)
    auto normalized = [](double v, double lo, double hi) {
        return hi > lo ? (v - lo) / (hi - lo) : 0.0;
    };
    for (auto& c : survivors)
        c.score = constraints.w_time * normalized(c.predicted_time_s, t_lo, t_hi) +
                  constraints.w_cost * normalized(c.billed_cost_usd, c_lo, c_hi);

    std::sort(survivors.begin(), survivors.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score < b.score;
        if (a.billed_cost_usd != b.billed_cost_usd) return a.billed_cost_usd < b.billed_cost_usd;
        if (a.instance.name != b.instance.name) return a.instance.name < b.instance.name;
        return a.day < b.day;
    });
    return survivors;
}

nlohmann::json recommendations_to_json(const std::vector<Candidate>& ranked) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& c = ranked[i];
        arr.push_back({
            {"instance", c.instance.name},
            {"day", c.day},
            {"predicted_time_s", c.predicted_time_s},
            {"billed_cost_usd", c.billed_cost_usd},
            {"score", c.score},
            {"rank", i + 1},
        });
    }
    return arr;
}

void print_table(std::ostream& out, const std::vector<Candidate>& ranked) {
    out << std::left << std::setw(6) << "rank" << std::setw(14) << "instance" << std::setw(5)
        << "day" << std::right << std::setw(14) << "pred time (s)" << std::setw(12) << "cost ($)"
        << std::setw(10) << "score" << '\n';
    out << std::string(61, '-') << '\n';
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& c = ranked[i];
        out << std::left << std::setw(6) << i + 1 << std::setw(14) << c.instance.name
            << std::setw(5) << c.day << std::right << std::fixed << std::setprecision(2)
            << std::setw(14) << c.predicted_time_s << std::setprecision(4) << std::setw(12)
            << c.billed_cost_usd << std::setw(10) << c.score << '\n';
        out.unsetf(std::ios::fixed);
    }
}

} // namespace daleel::planner
