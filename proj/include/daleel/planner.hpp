#pragma once

#include "daleel/portfolio.hpp"
#include "daleel/regress.hpp"

#include <json.hpp>

#include <iosfwd>
#include <vector>

namespace daleel::planner {

/// Pay-as-you-go billing: consumed units are rounded up to `granularity_s`.
struct BillingPolicy {
    int granularity_s = 3600;
};

/// One (instance type, weekday) deployment option.
struct Candidate {
    portfolio::InstanceSpec instance;
    int day = 0;
    double predicted_time_s = 0.0;
    double billed_cost_usd = 0.0;
    double score = 0.0; // in [0,1], lower is better; set by rank()
};

/// Seam for additional multi-criteria strategies; only the weighted sum is
/// implemented.
enum class ScoringMethod { WeightedSum };

/// Billed workload cost for a predicted duration.
double billed_cost(double predicted_time_s, double price_per_hour, const BillingPolicy& billing);

/// One unscored candidate per (instance, allowed day). Candidates whose
/// predicted time is nonpositive are excluded with a warning on stderr.
std::vector<Candidate> enumerate_candidates(const portfolio::Portfolio& portfolio,
                                            const portfolio::Constraints& constraints,
                                            const regress::FittedModel& model,
                                            const BillingPolicy& billing = {});

/// Filters by max execution time / budget, min-max normalizes both criteria
/// over the survivors, scores by the weighted sum, and sorts ascending.
/// Ties break toward lower billed cost, then instance name, then day.
/// Throws naming the binding constraint when nothing survives.
std::vector<Candidate> rank(std::vector<Candidate> candidates,
                            const portfolio::Constraints& constraints,
                            ScoringMethod method = ScoringMethod::WeightedSum);

nlohmann::json recommendations_to_json(const std::vector<Candidate>& ranked);
void print_table(std::ostream& out, const std::vector<Candidate>& ranked);

} // namespace daleel::planner
