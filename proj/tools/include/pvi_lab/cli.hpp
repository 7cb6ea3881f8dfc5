#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvi/modular.hpp"
#include "pvi/premodular.hpp"
#include "pvi_lab/report.hpp"

namespace pvi::lab
{

enum ExitCode { Success = 0, Usage = 1, Numerical = 2, AcceptanceFailure = 3 };

struct Execution {
    /// Empty command when argument parsing failed before a subcommand ran.
    Report report;
    int exit_code = Success;
    /// What goes to stdout (or to --out): the serialized report, or CSV for scan.
    std::string output;
    /// Help text, usage errors and progress lines.
    std::string messages;
};

/// argv without the program name, e.g. {"count", "--N", "5"}.
Execution execute(const std::vector<std::string> &args);

/// "a+bi", "a-bi", "bi", "a", "i"; throws InvalidArgument.
cplx parse_complex(const std::string &text);
std::string format_complex(cplx z);

/// A parameter given as "p/q", a decimal with at most 9 fractional digits (kept
/// exact), or anything parse_complex accepts.
struct Parameter {
    cplx value;
    std::optional<std::pair<std::int64_t, std::int64_t>> fraction;
};
Parameter parse_parameter(const std::string &text);
/// Exact pair on the common denominator when both parameters are fractions.
TorsionPair make_pair(const Parameter &r, const Parameter &s);

} // namespace pvi::lab
