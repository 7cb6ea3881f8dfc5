#include "pvi_lab/report.hpp"

#include <cmath>
#include <cstdio>

namespace pvi::lab
{

namespace
{

void write(std::string &out, const json &j, int depth)
{
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        // nlohmann::json keeps object keys in a std::map, so iteration is sorted.
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad + json(it.key()).dump() + ": ";
            write(out, it.value(), depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) {
                out += ",\n";
            }
            out += pad;
            write(out, j[i], depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case json::value_t::number_float: {
        const double x = j.get<double>();
        if (std::isnan(x)) {
            out += "\"nan\"";
        } else if (std::isinf(x)) {
            out += x > 0 ? "\"inf\"" : "\"-inf\"";
        } else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.15e", x);
            out += buf;
        }
        return;
    }
    default:
        out += j.dump();
    }
}

json to_json(const Report &r)
{
    return json{{"command", r.command},
                {"inputs", r.inputs},
                {"results", r.results},
                {"diagnostics", r.diagnostics},
                {"version", r.tool_version}};
}

} // namespace

std::string dump(const json &j)
{
    std::string out;
    write(out, j, 0);
    return out + "\n";
}

std::string serialize(const Report &r)
{
    return dump(to_json(r));
}

Report parse_report(const std::string &text)
{
    const json j = json::parse(text);
    Report r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.results = j.at("results");
    r.diagnostics = j.at("diagnostics");
    r.tool_version = j.at("version").get<std::string>();
    return r;
}

std::string deterministic_part(const Report &r)
{
    Report copy = r;
    copy.diagnostics.erase("timings");
    return serialize(copy);
}

} // namespace pvi::lab
