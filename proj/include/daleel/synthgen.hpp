#pragma once

#include "daleel/dataset.hpp"
#include "daleel/portfolio.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace daleel::synthgen {

/// Polynomial surface over (ram_gb, vcpu, day) with degrees (2, 3, 3).
struct GroundTruth {
    double intercept = 0.0;
    std::array<double, 2> ram{};  // ram, ram^2
    std::array<double, 3> vcpu{}; // vcpu, vcpu^2, vcpu^3
    std::array<double, 3> day{};  // day, day^2, day^3

    double operator()(double ram_gb, double vcpu_count, double day_of_week) const;
};

/// Generator configuration: the catalog to sweep, the true time surface,
/// optional per-instance shifts (model mismatch the surface cannot express),
/// and Gaussian noise.
struct Scenario {
    portfolio::Portfolio portfolio;
    GroundTruth truth;
    std::map<std::string, double> instance_offset_s;
    double noise_sd_s = 10.0;
    int runs_per_cell = 1;
    std::string app_id = "bench-app";
};

/// Catalog of eight instance types and a time surface with a pronounced
/// nonlinear shape: single-vCPU types are slow, m3.medium is slowest of the
/// classic six, and the t2 types are the cheapest per workload.
Scenario default_scenario();

Scenario load_scenario(const std::filesystem::path& path);

/// runs_per_cell records per (instance, day) cell. Each cell draws from an
/// independent substream of `seed`, so generation order cannot change the
/// data. Draws are resampled until positive.
dataset::Dataset generate(const Scenario& s, std::uint64_t seed);

} // namespace daleel::synthgen
