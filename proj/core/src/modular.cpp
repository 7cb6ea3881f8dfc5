#include "pvi/modular.hpp"

#include <cmath>
#include <sstream>

#include "pvi/errors.hpp"

namespace pvi
{

ModularMatrix::ModularMatrix(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : m_a(a), m_b(b), m_c(c), m_d(d)
{
    if (a * d - b * c != 1) {
        throw InvalidArgument("matrix " + to_string() + " does not have determinant 1");
    }
}

bool ModularMatrix::in_gamma2() const noexcept
{
    return (m_a % 2 != 0) && (m_d % 2 != 0) && (m_b % 2 == 0) && (m_c % 2 == 0);
}

bool ModularMatrix::in_gamma0_2() const noexcept
{
    return m_c % 2 == 0;
}

ModularMatrix ModularMatrix::inverse() const noexcept
{
    ModularMatrix r;
    r.m_a = m_d;
    r.m_b = -m_b;
    r.m_c = -m_c;
    r.m_d = m_a;
    return r;
}

ModularMatrix ModularMatrix::operator-() const noexcept
{
    ModularMatrix r;
    r.m_a = -m_a;
    r.m_b = -m_b;
    r.m_c = -m_c;
    r.m_d = -m_d;
    return r;
}

ModularMatrix operator*(const ModularMatrix &x, const ModularMatrix &y)
{
    return ModularMatrix(x.m_a * y.m_a + x.m_b * y.m_c, x.m_a * y.m_b + x.m_b * y.m_d,
                         x.m_c * y.m_a + x.m_d * y.m_c, x.m_c * y.m_b + x.m_d * y.m_d);
}

cplx ModularMatrix::act(cplx tau) const noexcept
{
    return (double(m_a) * tau + double(m_b)) / (double(m_c) * tau + double(m_d));
}

cplx ModularMatrix::factor(cplx tau) const noexcept
{
    return double(m_c) * tau + double(m_d);
}

std::string ModularMatrix::to_string() const
{
    std::ostringstream oss;
    oss << "[[" << m_a << "," << m_b << "],[" << m_c << "," << m_d << "]]";
    return oss.str();
}

std::ostream &operator<<(std::ostream &os, const ModularMatrix &m)
{
    return os << m.to_string();
}

cplx nome(cplx x) noexcept
{
    const double decay = std::exp(-2 * pi * x.imag());
    // Reduce the phase argument exactly-ish before taking sin/cos.
    const double frac = x.real() - std::round(x.real());
    return {decay * std::cos(2 * pi * frac), decay * std::sin(2 * pi * frac)};
}

Reduction reduce_to_standard_domain(cplx tau)
{
    if (!(tau.imag() > 0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
        throw DomainError("tau must lie in the upper half-plane");
    }
    ModularMatrix gamma;
    cplx t = tau;
    for (int iter = 0; iter < 10000; ++iter) {
        const double n = std::round(t.real());
        if (n != 0) {
            t -= n;
            gamma = ModularMatrix::translation(-static_cast<std::int64_t>(n)) * gamma;
        }
        if (std::norm(t) < 1 - 1e-15) {
            t = -1.0 / t;
            gamma = ModularMatrix::inversion() * gamma;
        } else {
            return {gamma, tau, t};
        }
    }
    throw InternalError("fundamental domain reduction did not terminate");
}

Reduction reduce_to_domain_F(cplx tau)
{
    constexpr double eps = 1e-13;
    Reduction red = reduce_to_standard_domain(tau);
    cplx t = red.reduced_tau;
    ModularMatrix g = red.gamma;
    if (t.real() < -eps) {
        t += 1.0;
        g = ModularMatrix::translation(1) * g;
    }
    // The right arc |tau - 1| = 1 is excluded; tau -> -1/(tau - 1) maps it onto the left arc.
    if (std::abs(std::abs(t - 1.0) - 1.0) < eps && t.real() > 0.5 + eps) {
        const ModularMatrix m(0, -1, 1, -1);
        t = m.act(t);
        g = m * g;
    }
    if (t.real() >= 1 - eps) {
        t -= 1.0;
        g = ModularMatrix::translation(-1) * g;
    }
    return {g, tau, t};
}

ModuliPoint::ModuliPoint(cplx tau)
    : m_tau(tau), m_q(0), m_reduction(reduce_to_standard_domain(tau))
{
    m_q = nome(tau);
}

} // namespace pvi
