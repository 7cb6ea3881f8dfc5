#pragma once

#include <string>

#include <json.hpp>

namespace pvi::lab
{

using json = nlohmann::json;

inline constexpr const char *version = "pvi-lab 0.1.0";

/// What every subcommand emits. `diagnostics.timings` is the only part that may
/// differ between two runs with the same arguments.
struct Report {
    std::string command;
    json inputs = json::object();
    json results = json::object();
    json diagnostics = json::object();
    std::string tool_version = version;
};

/// Sorted keys, two-space indent, every floating-point number as %.15e.
/// Non-finite numbers are written as the strings "inf", "-inf", "nan".
std::string serialize(const Report &r);
std::string dump(const json &j);
Report parse_report(const std::string &text);

/// The report without its timings, serialized; equal for repeated runs.
std::string deterministic_part(const Report &r);

} // namespace pvi::lab
