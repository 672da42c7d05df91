#include "daleel/dataset.hpp"

#include "daleel/csv.hpp"
#include "daleel/error.hpp"
#include "daleel/regress.hpp"
#include "daleel/rng.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

namespace daleel::dataset {

namespace {

constexpr const char* kModule = "dataset";
constexpr const char* kHeader =
    "timestamp,instance_name,vcpu,ram_gb,price_per_hour,day_of_week,execution_time_s,app_id";

int parse_field(std::string_view s, std::size_t pos, std::size_t len, const std::string& ts) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (ec != std::errc{} || ptr != s.data() + pos + len)
        throw Error(kModule, "malformed timestamp '" + ts + "'");
    return v;
}

} // namespace

int weekday_of(const std::string& timestamp) {
    // YYYY-MM-DD with optional [T ]HH:MM:SS[Z] tail
    std::string_view s = timestamp;
    if (s.size() < 10 || s[4] != '-' || s[7] != '-')
        throw Error(kModule, "malformed timestamp '" + timestamp + "'");
    const int y = parse_field(s, 0, 4, timestamp);
    const int m = parse_field(s, 5, 2, timestamp);
    const int d = parse_field(s, 8, 2, timestamp);
    if (s.size() > 10) {
        if ((s[10] != 'T' && s[10] != ' ') || s.size() < 19 || s[13] != ':' || s[16] != ':')
            throw Error(kModule, "malformed timestamp '" + timestamp + "'");
        const int hh = parse_field(s, 11, 2, timestamp);
        const int mm = parse_field(s, 14, 2, timestamp);
        const int ss = parse_field(s, 17, 2, timestamp);
        if (hh > 23 || mm > 59 || ss > 60)
            throw Error(kModule, "invalid time of day in '" + timestamp + "'");
        if (s.size() > 19 && !(s.size() == 20 && s[19] == 'Z'))
            throw Error(kModule, "malformed timestamp '" + timestamp + "'");
    }

    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) throw Error(kModule, "invalid calendar date in '" + timestamp + "'");
    return int(std::chrono::weekday{std::chrono::sys_days{ymd}}.iso_encoding());
}

Dataset ingest_runs(const std::filesystem::path& path) {
    auto rows = csv::read_table(path, kHeader, kModule);

    Dataset out;
    out.provenance = path.string();
    out.records.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string where = "row " + std::to_string(i + 1);

        RunRecord rec;
        rec.timestamp = r[0];
        rec.instance_name = r[1];
        rec.vcpu = csv::parse_int(r[2], kModule, where + " vcpu");
        rec.ram_gb = csv::parse_double(r[3], kModule, where + " ram_gb");
        rec.price_per_hour = csv::parse_double(r[4], kModule, where + " price_per_hour");
        rec.execution_time_s = csv::parse_double(r[6], kModule, where + " execution_time_s");
        rec.app_id = r[7];

        const int derived = weekday_of(rec.timestamp);
        if (r[5].empty()) {
            rec.day_of_week = derived;
        } else {
            rec.day_of_week = csv::parse_int(r[5], kModule, where + " day_of_week");
            if (rec.day_of_week != derived)
                throw Error(kModule, where + ": day_of_week " + std::to_string(rec.day_of_week) +
                                         " does not match timestamp weekday " +
                                         std::to_string(derived));
        }
        if (rec.vcpu < 1) throw Error(kModule, where + ": vcpu must be >= 1");
        if (rec.ram_gb <= 0) throw Error(kModule, where + ": ram_gb must be positive");
        if (rec.price_per_hour <= 0)
            throw Error(kModule, where + ": price_per_hour must be positive");
        if (rec.execution_time_s <= 0)
            throw Error(kModule, where + ": execution_time_s must be positive");

        out.records.push_back(std::move(rec));
    }
    return out;
}

void write_runs(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream outf(path);
    if (!outf) throw Error(kModule, "cannot write file: " + path.string());
    outf << kHeader << '\n';
    for (const auto& r : d.records) {
        outf << r.timestamp << ',' << r.instance_name << ',' << r.vcpu << ','
             << csv::format_double(r.ram_gb) << ',' << csv::format_double(r.price_per_hour) << ','
             << r.day_of_week << ',' << csv::format_double(r.execution_time_s) << ',' << r.app_id
             << '\n';
    }
}

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(kModule, "train fraction must lie in (0, 1)");
    const std::size_t n = d.records.size();
    if (n < 2) throw Error(kModule, "need at least 2 records to split");

    const auto order = rng::shuffled_indices(n, seed);
    const auto n_train =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));

    Dataset train, test;
    train.provenance = d.provenance + " [train]";
    test.provenance = d.provenance + " [test]";
    train.records.reserve(n_train);
    test.records.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i)
        (i < n_train ? train : test).records.push_back(d.records[order[i]]);
    return {std::move(train), std::move(test)};
}

DesignMatrix to_design(const Dataset& d, const regress::BasisSpec& basis) {
    const std::size_t n = d.records.size();
    if (n == 0) throw Error(kModule, "cannot build a design matrix from an empty dataset");

    DesignMatrix m;
    m.basis = basis;
    m.values.resize(static_cast<Eigen::Index>(n), 1 + basis.feature_count());
    m.response.resize(static_cast<Eigen::Index>(n));

    m.column_labels.push_back("intercept");
    auto label_block = [&](const std::string& name, int degree) {
        for (int k = 1; k <= degree; ++k)
            m.column_labels.push_back(k == 1 ? name : name + "^" + std::to_string(k));
    };
    label_block("ram", basis.ram_degree);
    label_block("vcpu", basis.vcpu_degree);
    label_block("day", basis.day_degree);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = d.records[i];
        m.values.row(static_cast<Eigen::Index>(i)) =
            regress::expand_basis(r.ram_gb, r.vcpu, r.day_of_week, basis).transpose();
        m.response(static_cast<Eigen::Index>(i)) = r.execution_time_s;
    }
    return m;
}

} // namespace daleel::dataset
