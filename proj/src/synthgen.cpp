#include "daleel/synthgen.hpp"

#include "daleel/error.hpp"
#include "daleel/rng.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

namespace daleel::synthgen {

namespace {

constexpr const char* kModule = "synthgen";

std::string timestamp_for(int day_of_week, int run, std::size_t instance_index) {
    using namespace std::chrono;
    // 2015-06-01 is a Monday; repetitions of a weekday advance whole weeks
    const sys_days base = sys_days{year{2015} / June / 1};
    const sys_days date = base + days{(day_of_week - 1) + 7 * run};
    const year_month_day ymd{date};
    const int minutes_past = static_cast<int>(instance_index) * 10;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:00", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), 9 + minutes_past / 60,
                  minutes_past % 60);
    return buf;
}

void validate(const Scenario& s) {
    if (s.portfolio.empty()) throw Error(kModule, "scenario portfolio is empty");
    if (s.runs_per_cell < 1) throw Error(kModule, "runs_per_cell must be >= 1");
    if (s.noise_sd_s < 0) throw Error(kModule, "noise_sd_s must be nonnegative");
    if (s.app_id.empty()) throw Error(kModule, "app_id must be nonempty");

    std::unordered_set<std::string> names;
    for (const auto& inst : s.portfolio)
        if (!names.insert(inst.name).second)
            throw Error(kModule, "duplicate instance in scenario: " + inst.name);
    for (const auto& [name, off] : s.instance_offset_s) {
        if (!names.count(name))
            throw Error(kModule, "offset for unknown instance: " + name);
        if (!std::isfinite(off)) throw Error(kModule, "offset for " + name + " is not finite");
    }
}

} // namespace

double GroundTruth::operator()(double ram_gb, double vcpu_count, double day_of_week) const {
    auto poly = [](double x, const auto& coeffs) {
        double acc = 0.0;
        double xp = 1.0;
        for (double c : coeffs) {
            xp *= x;
            acc += c * xp;
        }
        return acc;
    };
    return intercept + poly(ram_gb, ram) + poly(vcpu_count, vcpu) + poly(day_of_week, day);
}

Scenario default_scenario() {
    using portfolio::InstanceSpec;
    Scenario s;
    s.portfolio = {
        InstanceSpec{"t2.small", "T2", 1, std::nullopt, 2.0, 20.0, 0.026},
        InstanceSpec{"t2.medium", "T2", 2, std::nullopt, 4.0, 20.0, 0.052},
        InstanceSpec{"m3.medium", "M3", 1, 3.0, 3.75, 4.0, 0.070},
        InstanceSpec{"m3.large", "M3", 2, 6.5, 7.5, 32.0, 0.140},
        InstanceSpec{"c4.large", "C4", 2, 8.0, 3.75, 20.0, 0.116},
        InstanceSpec{"c4.xlarge", "C4", 4, 16.0, 7.5, 20.0, 0.232},
        // two larger types so every polynomial degree is identifiable
        InstanceSpec{"m3.xlarge", "M3", 4, 13.0, 15.0, 80.0, 0.280},
        InstanceSpec{"c4.2xlarge", "C4", 8, 31.0, 15.0, 20.0, 0.464},
    };
    s.truth.intercept = 250.0;
    s.truth.ram = {-26.0, 1.9};
    s.truth.vcpu = {-70.0, 12.0, -0.55};
    s.truth.day = {12.0, -3.0, 0.23};
    s.instance_offset_s = {
        {"t2.small", -25.0}, {"t2.medium", -8.0}, {"m3.medium", 50.0},
        {"m3.large", 10.0},  {"c4.large", -12.0}, {"m3.xlarge", 6.0},
    };
    s.noise_sd_s = 10.0;
    s.runs_per_cell = 36; // 8 instances x 7 days x 36 ~ 2000 records
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, "cannot open file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, "malformed JSON in " + path.string() + ": " + e.what());
    }

    Scenario s;
    try {
        s.app_id = j.value("app_id", s.app_id);
        s.noise_sd_s = j.value("noise_sd_s", s.noise_sd_s);
        s.runs_per_cell = j.value("runs_per_cell", s.runs_per_cell);
        for (const auto& inst : j.at("portfolio")) {
            portfolio::InstanceSpec spec;
            spec.name = inst.at("name").get<std::string>();
            spec.series = inst.value("series", "");
            spec.vcpu = inst.at("vcpu").get<int>();
            if (inst.contains("ecu") && !inst.at("ecu").is_string())
                spec.ecu = inst.at("ecu").get<double>();
            spec.ram_gb = inst.at("ram_gb").get<double>();
            spec.storage_gb = inst.value("storage_gb", 0.0);
            spec.price_per_hour = inst.at("price_per_hour").get<double>();
            s.portfolio.push_back(std::move(spec));
        }
        const auto& gt = j.at("ground_truth");
        s.truth.intercept = gt.at("intercept").get<double>();
        const auto ram = gt.at("ram").get<std::vector<double>>();
        const auto vcpu = gt.at("vcpu").get<std::vector<double>>();
        const auto day = gt.at("day").get<std::vector<double>>();
        if (ram.size() != 2 || vcpu.size() != 3 || day.size() != 3)
            throw Error(kModule, "ground_truth must have 2 ram, 3 vcpu, and 3 day coefficients");
        std::copy(ram.begin(), ram.end(), s.truth.ram.begin());
        std::copy(vcpu.begin(), vcpu.end(), s.truth.vcpu.begin());
        std::copy(day.begin(), day.end(), s.truth.day.begin());
        if (j.contains("instance_offset_s"))
            for (auto it = j.at("instance_offset_s").begin(); it != j.at("instance_offset_s").end();
                 ++it)
                s.instance_offset_s[it.key()] = it.value().get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, std::string("bad scenario value: ") + e.what());
    }
    validate(s);
    return s;
}

dataset::Dataset generate(const Scenario& s, std::uint64_t seed) {
    validate(s);

    dataset::Dataset out;
    out.provenance = "synthetic scenario, seed " + std::to_string(seed);
    out.records.reserve(s.portfolio.size() * 7 * static_cast<std::size_t>(s.runs_per_cell));

    for (std::size_t i = 0; i < s.portfolio.size(); ++i) {
        const auto& inst = s.portfolio[i];
        const auto off = s.instance_offset_s.find(inst.name);
        const double offset = off == s.instance_offset_s.end() ? 0.0 : off->second;
        for (int day = 1; day <= 7; ++day) {
            const double cell_mean = s.truth(inst.ram_gb, inst.vcpu, day) + offset;
            if (!(cell_mean > 0))
                throw Error(kModule, "ground truth nonpositive for " + inst.name + " on day " +
                                         std::to_string(day));
            rng::Engine eng(rng::derive_seed(seed, i, static_cast<std::uint64_t>(day)));
            for (int run = 0; run < s.runs_per_cell; ++run) {
                double t = 0.0;
                int attempts = 0;
                do {
                    t = cell_mean + s.noise_sd_s * eng.next_normal();
                    if (++attempts > 10000)
                        throw Error(kModule, "cannot draw a positive time for " + inst.name +
                                                 " on day " + std::to_string(day));
                } while (!(t > 0));

                dataset::RunRecord rec;
                rec.timestamp = timestamp_for(day, run, i);
                rec.instance_name = inst.name;
                rec.vcpu = inst.vcpu;
                rec.ram_gb = inst.ram_gb;
                rec.price_per_hour = inst.price_per_hour;
                rec.day_of_week = day;
                rec.execution_time_s = t;
                rec.app_id = s.app_id;
                out.records.push_back(std::move(rec));
            }
        }
    }
    return out;
}

} // namespace daleel::synthgen
