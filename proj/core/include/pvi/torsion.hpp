#ifndef PVI_TORSION_HPP
#define PVI_TORSION_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pvi/modular.hpp"

namespace pvi
{

// Exact integer arithmetic on N-torsion parameters. No floating point in here.

/// The pair (r, s) = (k1/N, k2/N) with 0 <= k1, k2 < N.
struct RationalPair {
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    std::int64_t N = 1;

    /// Reduces k1, k2 into [0, N).
    static RationalPair normalized(std::int64_t k1, std::int64_t k2, std::int64_t N);

    bool in_qn() const;
    /// "k1/N,k2/N" with each fraction in lowest terms.
    std::string to_string() const;

    friend auto operator<=>(const RationalPair &, const RationalPair &) = default;
};

/// Euler's totient of numerator/denominator; zero when the quotient is not an integer.
std::int64_t euler_phi(std::int64_t numerator, std::int64_t denominator = 1);

/// |Q_N| from the product formula N^2 prod_{p | N} (1 - 1/p^2).
std::int64_t qn_size(std::int64_t N);

/// All pairs with gcd(k1, k2, N) = 1, sorted lexicographically by (k1, k2).
std::vector<RationalPair> enumerate_qn(std::int64_t N);

/// |Q_N|/4 - phi(N) - phi(N/2).
std::int64_t p_of_n(std::int64_t N);

struct PoleCount {
    int num_solutions = 0;
    std::int64_t poles_per_solution = 0;
};

PoleCount pole_count(std::int64_t N);

struct OrbitReport {
    RationalPair input;
    /// One of (0, 1/N), (1/N, 0), (1/N, 1/N), written as (r, s).
    RationalPair representative;
    /// gamma_2 * gamma_1 in Gamma(2).
    ModularMatrix gamma_witness;
    ModularMatrix gamma1, gamma2;
    int sign = 1;
    /// (k2, k1) = sign * (rep_k2, rep_k1) . gamma + N * shift.
    std::array<std::int64_t, 2> shift{};
    bool verified = false;
};

/// Constructive Gamma(2) classification of a point of Q_N. Throws InvalidArgument
/// if the pair is not in Q_N, InternalError if the witness fails verification.
OrbitReport classify_orbit(const RationalPair &p);

/// Checks (k2, k1) = sign * (rep) . gamma + N * shift exactly; fills in shift.
bool verify_orbit(OrbitReport &report);

/// Partition of Q_N / {+-1} into Gamma(2)-orbits by breadth-first search over the
/// generators [[1,2],[0,1]], [[1,0],[2,1]] and their inverses. Each class lists
/// its canonical members (lexicographically smaller of p and -p), sorted; classes
/// are sorted by their first member. Throws DepthExceeded if some search has not
/// closed after max_depth levels.
std::vector<std::vector<RationalPair>> orbit_brute_force(std::int64_t N, int max_depth = 64);

/// The canonical member of {p, -p}.
RationalPair canonical_sign(const RationalPair &p);

/// A matrix in Gamma(2) with first row (a, b); a odd, b even, gcd(a, b) = 1.
ModularMatrix gamma2_with_first_row(std::int64_t a, std::int64_t b);
/// A matrix in Gamma(2) with second row (c, d); c even, d odd, gcd(c, d) = 1.
ModularMatrix gamma2_with_second_row(std::int64_t c, std::int64_t d);
/// A matrix in Gamma(2) with (1, 1) . gamma = (x, y); x, y odd, gcd(x, y) = 1.
ModularMatrix gamma2_with_column_sums(std::int64_t x, std::int64_t y);

} // namespace pvi

#endif
