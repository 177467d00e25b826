#pragma once

#include "tadsim/harness/report.hpp"

#include <filesystem>
#include <string_view>

namespace tadsim::harness {

enum class Format : std::uint8_t
{
    Csv,
    Json,
};

// Throws ConfigError for anything but "csv" or "json".
Format format_from_string(std::string_view name);

// CSV: intervals.csv, energy.csv, counters.csv, tsr.csv and convergence.csv
// in `dir`. JSON: dir/report.json. Creates `dir` if needed; throws IoError
// naming the offending path.
void export_report(const ExperimentReport& r, Format format, const std::filesystem::path& dir);

// Reads a report.json written by export_report.
ExperimentReport load_report(const std::filesystem::path& file);

// Compact serialisation used for byte-level comparisons.
std::string dump(const ExperimentReport& r);

} // namespace tadsim::harness
