#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <regex>

#include "pvi/errors.hpp"
#include "pvi_lab/cli.hpp"

namespace pvi::lab
{

namespace
{

double to_double(const std::string &text, const std::string &whole)
{
    double x = 0;
    const char *first = text.data(), *last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || first == last) {
        throw InvalidArgument("cannot read '" + whole + "' as a number");
    }
    return x;
}

std::int64_t to_int(const std::string &text, const std::string &whole)
{
    std::int64_t x = 0;
    const char *first = text.data(), *last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last || first == last) {
        throw InvalidArgument("cannot read '" + whole + "' as a fraction p/q");
    }
    return x;
}

} // namespace

cplx parse_complex(const std::string &raw)
{
    std::string t;
    for (char ch : raw) {
        if (ch != ' ') {
            t += ch;
        }
    }
    if (t.empty()) {
        throw InvalidArgument("empty complex number");
    }
    if (t.back() != 'i') {
        return {to_double(t, raw), 0.0};
    }
    t.pop_back();
    // The sign separating the parts: not the leading one, not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : t.substr(0, split);
    std::string im = split == std::string::npos ? t : t.substr(split);
    if (im.empty() || im == "+" || im == "-") {
        im += "1";
    }
    return {re.empty() ? 0.0 : to_double(re, raw), to_double(im, raw)};
}

std::string format_complex(cplx z)
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.15e%+.15ei", z.real(), z.imag());
    return buf;
}

Parameter parse_parameter(const std::string &text)
{
    Parameter out;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const std::int64_t p = to_int(text.substr(0, slash), text), q = to_int(text.substr(slash + 1), text);
        if (q <= 0) {
            throw InvalidArgument("denominator of '" + text + "' must be positive");
        }
        const std::int64_t g = std::gcd(p, q);
        out.fraction = {{p / g, q / g}};
        out.value = double(p) / double(q);
        return out;
    }
    static const std::regex decimal(R"(([+-]?)(\d+)(?:\.(\d{0,9}))?)");
    std::smatch m;
    if (std::regex_match(text, m, decimal)) {
        const std::string frac = m[3].str();
        std::int64_t q = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) {
            q *= 10;
        }
        std::int64_t p = to_int(m[2].str() + frac, text);
        if (m[1].str() == "-") {
            p = -p;
        }
        const std::int64_t g = std::gcd(p, q);
        out.fraction = {{p / g, q / g}};
        out.value = double(p) / double(q);
        return out;
    }
    out.value = parse_complex(text);
    return out;
}

TorsionPair make_pair(const Parameter &r, const Parameter &s)
{
    if (r.fraction && s.fraction) {
        const auto [p1, q1] = *r.fraction;
        const auto [p2, q2] = *s.fraction;
        const std::int64_t N = std::lcm(q1, q2);
        return TorsionPair::rational(p1 * (N / q1), p2 * (N / q2), N);
    }
    return TorsionPair(r.value, s.value);
}

} // namespace pvi::lab
