#include "pvi/torsion.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "pvi/errors.hpp"

namespace pvi
{

namespace
{

std::int64_t mod(std::int64_t a, std::int64_t n)
{
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

bool odd(std::int64_t x)
{
    return x % 2 != 0;
}

// Returns (g, x, y) with a x + b y = g = gcd(a, b) >= 0.
std::array<std::int64_t, 3> ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        old_r = std::exchange(r, old_r - q * r);
        old_x = std::exchange(x, old_x - q * x);
        old_y = std::exchange(y, old_y - q * y);
    }
    if (old_r < 0) {
        return {-old_r, -old_x, -old_y};
    }
    return {old_r, old_x, old_y};
}

std::string fraction(std::int64_t k, std::int64_t n)
{
    if (k == 0) {
        return "0";
    }
    const std::int64_t g = std::gcd(k, n);
    if (n / g == 1) {
        return std::to_string(k / g);
    }
    return std::to_string(k / g) + "/" + std::to_string(n / g);
}

} // namespace

RationalPair RationalPair::normalized(std::int64_t k1, std::int64_t k2, std::int64_t N)
{
    if (N < 1) {
        throw InvalidArgument("torsion order must be positive");
    }
    return {mod(k1, N), mod(k2, N), N};
}

bool RationalPair::in_qn() const
{
    return N >= 1 && k1 >= 0 && k2 >= 0 && k1 < N && k2 < N && std::gcd(std::gcd(k1, k2), N) == 1;
}

std::string RationalPair::to_string() const
{
    return fraction(k1, N) + "," + fraction(k2, N);
}

std::int64_t euler_phi(std::int64_t numerator, std::int64_t denominator)
{
    if (denominator == 0 || numerator % denominator != 0) {
        return 0;
    }
    std::int64_t n = numerator / denominator;
    if (n < 1) {
        return 0;
    }
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            result -= result / p;
        }
    }
    if (n > 1) {
        result -= result / n;
    }
    return result;
}

std::int64_t qn_size(std::int64_t N)
{
    std::int64_t n = N;
    std::int64_t num = N * N, den = 1;
    for (std::int64_t p = 2; p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                n /= p;
            }
            num *= p * p - 1;
            den *= p * p;
        }
    }
    return num / den;
}

std::vector<RationalPair> enumerate_qn(std::int64_t N)
{
    if (N < 1) {
        throw InvalidArgument("torsion order must be positive");
    }
    std::vector<RationalPair> out;
    for (std::int64_t k1 = 0; k1 < N; ++k1) {
        for (std::int64_t k2 = 0; k2 < N; ++k2) {
            if (std::gcd(std::gcd(k1, k2), N) == 1) {
                out.push_back({k1, k2, N});
            }
        }
    }
    return out;
}

std::int64_t p_of_n(std::int64_t N)
{
    if (N < 3) {
        throw InvalidArgument("P(N) needs N >= 3");
    }
    const std::int64_t q = qn_size(N);
    if (q % 4 != 0) {
        throw InternalError("|Q_N| not divisible by 4 for N = " + std::to_string(N));
    }
    return q / 4 - (euler_phi(N) + euler_phi(N, 2));
}

PoleCount pole_count(std::int64_t N)
{
    if (N < 3) {
        throw InvalidArgument("pole count needs N >= 3");
    }
    const std::int64_t q = qn_size(N);
    PoleCount out;
    if (odd(N)) {
        out.num_solutions = 1;
        out.poles_per_solution = 3 * q / 4 - 3 * euler_phi(N);
        if (out.poles_per_solution != 3 * p_of_n(N)) {
            throw InternalError("odd pole count disagrees with 3 P(N)");
        }
    } else {
        out.num_solutions = 3;
        out.poles_per_solution = q / 4 - (euler_phi(N) + euler_phi(N, 2));
        if (out.poles_per_solution != p_of_n(N)) {
            throw InternalError("even pole count disagrees with P(N)");
        }
    }
    return out;
}

ModularMatrix gamma2_with_first_row(std::int64_t a, std::int64_t b)
{
    if (!odd(a) || odd(b)) {
        throw InvalidArgument("first row of a Gamma(2) matrix must be (odd, even)");
    }
    // a d - b c = 1.
    auto [g, x, y] = ext_gcd(a, -b);
    if (g != 1) {
        throw InvalidArgument("first row entries are not coprime");
    }
    std::int64_t d = x, c = y;
    // The solution family is (c + k a, d + k b); d is forced odd, fix the parity of c.
    if (odd(c)) {
        c += a;
        d += b;
    }
    return {a, b, c, d};
}

ModularMatrix gamma2_with_second_row(std::int64_t c, std::int64_t d)
{
    if (odd(c) || !odd(d)) {
        throw InvalidArgument("second row of a Gamma(2) matrix must be (even, odd)");
    }
    auto [g, x, y] = ext_gcd(d, -c);
    if (g != 1) {
        throw InvalidArgument("second row entries are not coprime");
    }
    std::int64_t a = x, b = y;
    if (odd(b)) {
        a += c;
        b += d;
    }
    return {a, b, c, d};
}

ModularMatrix gamma2_with_column_sums(std::int64_t x, std::int64_t y)
{
    if (!odd(x) || !odd(y)) {
        throw InvalidArgument("column sums must both be odd");
    }
    // l1 y + l2 x = 1, then the two explicit forms depending on the parity of l1.
    auto [g, l1, l2] = ext_gcd(y, x);
    if (g != 1) {
        throw InvalidArgument("column sums are not coprime");
    }
    if (odd(l1)) {
        return {l1, -l2, x - l1, y + l2};
    }
    return {x + l1, y - l2, -l1, l2};
}

bool verify_orbit(OrbitReport &rep)
{
    const std::int64_t N = rep.input.N;
    const std::array<std::int64_t, 2> base{rep.sign * rep.representative.k2,
                                           rep.sign * rep.representative.k1};
    const auto img = row_times(base, rep.gamma_witness);
    const std::int64_t d0 = rep.input.k2 - img[0];
    const std::int64_t d1 = rep.input.k1 - img[1];
    rep.verified = rep.gamma_witness.in_gamma2() && d0 % N == 0 && d1 % N == 0;
    if (rep.verified) {
        rep.shift = {d0 / N, d1 / N};
    }
    return rep.verified;
}

OrbitReport classify_orbit(const RationalPair &p)
{
    if (!p.in_qn()) {
        throw InvalidArgument("pair " + p.to_string() + " is not in Q_N");
    }
    const std::int64_t N = p.N;
    const std::int64_t L = std::gcd(p.k1, p.k2);
    const std::int64_t m1 = p.k1 / L, m2 = p.k2 / L;

    OrbitReport rep;
    rep.input = p;
    // Representatives as (r, s) numerators.
    const RationalPair r0s1{0, 1, N}, r1s0{1, 0, N}, r1s1{1, 1, N};

    if (odd(m1) && odd(m2)) {
        // (s, r) = (L/N, L/N) . gamma1.
        rep.gamma1 = gamma2_with_column_sums(m2, m1);
        if (odd(L) && odd(N)) {
            auto [g, d1, d2] = ext_gcd(L, 2 * (L - N));
            if (g != 1) {
                throw InternalError("gcd(L, 2(L - N)) != 1");
            }
            rep.gamma2 = ModularMatrix(L, L - N, -2 * d2, d1);
            rep.representative = r0s1;
        } else if (!odd(L) && odd(N)) {
            auto [g, dt1, dt2] = ext_gcd(2 * L, L - N);
            if (g != 1) {
                throw InternalError("gcd(2L, L - N) != 1");
            }
            rep.gamma2 = ModularMatrix(dt2, -2 * dt1, L, L - N);
            rep.representative = r1s0;
        } else {
            rep.gamma2 = gamma2_with_column_sums(L, L - N);
            rep.representative = r1s1;
        }
    } else if (!odd(m1)) {
        // (s, r) = (L/N, 0) . gamma1.
        rep.gamma1 = gamma2_with_first_row(m2, m1);
        if (odd(L) && !odd(N)) {
            rep.gamma2 = gamma2_with_first_row(L, N);
            rep.representative = r0s1;
        } else if (!odd(L) && odd(N)) {
            rep.gamma2 = gamma2_with_second_row(L, N);
            rep.representative = r1s0;
        } else {
            rep.gamma2 = gamma2_with_column_sums(L, N);
            rep.representative = r1s1;
        }
    } else {
        // m2 even: (s, r) = (0, L/N) . gamma1.
        rep.gamma1 = gamma2_with_second_row(m2, m1);
        if (odd(L) && !odd(N)) {
            rep.gamma2 = gamma2_with_second_row(N, L);
            rep.representative = r1s0;
        } else if (!odd(L) && odd(N)) {
            rep.gamma2 = gamma2_with_first_row(N, L);
            rep.representative = r0s1;
        } else {
            rep.gamma2 = gamma2_with_column_sums(N, L);
            rep.representative = r1s1;
        }
    }
    rep.gamma_witness = rep.gamma2 * rep.gamma1;
    rep.sign = 1;
    if (!verify_orbit(rep)) {
        throw InternalError("orbit witness failed verification for " + p.to_string());
    }
    return rep;
}

RationalPair canonical_sign(const RationalPair &p)
{
    const RationalPair neg = RationalPair::normalized(-p.k1, -p.k2, p.N);
    return std::min(p, neg);
}

std::vector<std::vector<RationalPair>> orbit_brute_force(std::int64_t N, int max_depth)
{
    const std::array<ModularMatrix, 4> gens{ModularMatrix(1, 2, 0, 1), ModularMatrix(1, -2, 0, 1),
                                            ModularMatrix(1, 0, 2, 1), ModularMatrix(1, 0, -2, 1)};
    std::set<RationalPair> nodes;
    for (const auto &p : enumerate_qn(N)) {
        nodes.insert(canonical_sign(p));
    }
    std::map<RationalPair, int> label;
    std::vector<std::vector<RationalPair>> classes;
    for (const auto &start : nodes) {
        if (label.count(start)) {
            continue;
        }
        const int id = int(classes.size());
        classes.emplace_back();
        std::deque<RationalPair> frontier{start};
        label[start] = id;
        int depth = 0;
        while (!frontier.empty()) {
            if (depth >= max_depth) {
                throw DepthExceeded("orbit search for N = " + std::to_string(N) + " did not close within depth " +
                                    std::to_string(max_depth));
            }
            std::deque<RationalPair> next;
            for (const auto &x : frontier) {
                classes[id].push_back(x);
                for (const auto &g : gens) {
                    const auto v = row_times(std::array<std::int64_t, 2>{x.k2, x.k1}, g);
                    const auto y = canonical_sign(RationalPair::normalized(v[1], v[0], N));
                    if (!label.count(y)) {
                        label[y] = id;
                        next.push_back(y);
                    }
                }
            }
            frontier = std::move(next);
            ++depth;
        }
        std::sort(classes[id].begin(), classes[id].end());
    }
    std::sort(classes.begin(), classes.end());
    return classes;
}

} // namespace pvi
