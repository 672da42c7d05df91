#pragma once

#include "daleel/design.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace daleel::dataset {

/// One profiled application execution.
struct RunRecord {
    std::string timestamp;      // ISO-8601, e.g. 2014-01-06T09:00:00
    std::string instance_name;
    int vcpu = 0;
    double ram_gb = 0.0;
    double price_per_hour = 0.0;
    int day_of_week = 0;        // 1 = Monday .. 7 = Sunday
    double execution_time_s = 0.0;
    std::string app_id;
};

struct Dataset {
    std::vector<RunRecord> records;
    std::string provenance;

    std::size_t size() const { return records.size(); }
};

/// ISO weekday (1 = Monday) of an ISO-8601 timestamp
/// (`YYYY-MM-DD[T ]HH:MM:SS[Z]`, time part optional).
int weekday_of(const std::string& timestamp);

/// Reads a runs CSV
/// (`timestamp,instance_name,vcpu,ram_gb,price_per_hour,day_of_week,execution_time_s,app_id`).
/// A blank `day_of_week` is derived from the timestamp; a filled one must
/// agree with it.
Dataset ingest_runs(const std::filesystem::path& path);

/// Writes the same CSV format ingest_runs reads.
void write_runs(const Dataset& d, const std::filesystem::path& path);

/// Seeded uniform shuffle, then prefix cut: |train| = round(fraction * n).
/// The two halves partition the dataset.
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, std::uint64_t seed);

/// Basis-expands every record's (ram_gb, vcpu, day_of_week); the response is
/// execution time in seconds.
DesignMatrix to_design(const Dataset& d, const regress::BasisSpec& basis);

} // namespace daleel::dataset
