#ifndef PVI_MODULAR_HPP
#define PVI_MODULAR_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace pvi
{

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// An element of SL(2, Z).
///
/// The determinant is checked on construction. Acting on the upper half-plane by
/// Moebius transformations, and on row vectors (s, r) from the right.
class ModularMatrix
{
public:
    /// Identity.
    constexpr ModularMatrix() = default;
    /// Throws InvalidArgument unless ad - bc == 1.
    ModularMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    std::int64_t a() const noexcept { return m_a; }
    std::int64_t b() const noexcept { return m_b; }
    std::int64_t c() const noexcept { return m_c; }
    std::int64_t d() const noexcept { return m_d; }

    /// a, d odd and b, c even.
    bool in_gamma2() const noexcept;
    /// c even.
    bool in_gamma0_2() const noexcept;

    ModularMatrix inverse() const noexcept;
    ModularMatrix operator-() const noexcept;
    friend ModularMatrix operator*(const ModularMatrix &x, const ModularMatrix &y);
    friend bool operator==(const ModularMatrix &, const ModularMatrix &) = default;

    /// (a tau + b) / (c tau + d).
    cplx act(cplx tau) const noexcept;
    /// The automorphy factor c tau + d.
    cplx factor(cplx tau) const noexcept;

    std::string to_string() const;

    static ModularMatrix translation(std::int64_t n) { return {1, n, 0, 1}; }
    /// tau -> -1/tau.
    static ModularMatrix inversion() { return {0, -1, 1, 0}; }

private:
    std::int64_t m_a = 1, m_b = 0, m_c = 0, m_d = 1;
};

std::ostream &operator<<(std::ostream &os, const ModularMatrix &m);

/// How a point was moved into the standard fundamental domain
/// {|Re tau| <= 1/2, |tau| >= 1}: reduced_tau = gamma . original_tau.
struct Reduction {
    ModularMatrix gamma;
    cplx original_tau;
    cplx reduced_tau;
};

/// A point of the upper half-plane together with its nome and its reduction
/// into the standard fundamental domain. Immutable.
class ModuliPoint
{
public:
    /// Throws DomainError if Im(tau) <= 0 or tau is not finite.
    explicit ModuliPoint(cplx tau);

    cplx tau() const noexcept { return m_tau; }
    /// exp(2 pi i tau).
    cplx q() const noexcept { return m_q; }
    const Reduction &reduction() const noexcept { return m_reduction; }
    /// c tau + d for the reducing matrix.
    cplx reduction_factor() const noexcept { return m_reduction.gamma.factor(m_tau); }

private:
    cplx m_tau;
    cplx m_q;
    Reduction m_reduction;
};

/// Reduce tau into {|Re| <= 1/2, |tau| >= 1}.
Reduction reduce_to_standard_domain(cplx tau);

/// Reduce tau into F = {0 <= Re < 1, |tau| >= 1, |tau - 1| > 1} union {rho}.
Reduction reduce_to_domain_F(cplx tau);

/// exp(2 pi i x), computed as a phase times a real decay.
cplx nome(cplx x) noexcept;

/// Row vector times matrix: (s, r) . gamma.
template <typename T>
std::array<T, 2> row_times(const std::array<T, 2> &v, const ModularMatrix &g)
{
    return {v[0] * T(g.a()) + v[1] * T(g.c()), v[0] * T(g.b()) + v[1] * T(g.d())};
}

} // namespace pvi

#endif
