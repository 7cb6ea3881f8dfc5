#include "pvi/elliptic.hpp"

#include <cmath>
#include <limits>

#include "pvi/errors.hpp"
#include "pvi/series.hpp"

namespace pvi
{

namespace
{

constexpr double eps = std::numeric_limits<double>::epsilon();

series::ReducedArgument checked_reduction(cplx z, const ModuliPoint &m)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidArgument("non-finite argument");
    }
    auto red = series::reduce_argument(z, m);
    if (std::abs(red.w) < near_singular_distance) {
        throw NearSingular("argument lies on the period lattice to within 1e-8");
    }
    return red;
}

} // namespace

HalfPeriods half_periods(const ModuliPoint &m)
{
    return {{0.0, 1.0, m.tau(), 1.0 + m.tau()}};
}

ReducedInvariants reduced_invariants(cplx tau_r)
{
    const auto l = series::lambert_sums(nome(tau_r));
    ReducedInvariants out;
    out.eta1 = (pi * pi / 3.0) * series::eisenstein_e2(l);
    out.eta2 = tau_r * out.eta1 - cplx(0, 2 * pi);
    const double pi4 = pi * pi * pi * pi;
    out.g2 = (4.0 * pi4 / 3.0) * series::eisenstein_e4(l);
    out.g2_small = 320.0 * pi4 * l.s3;
    out.g3 = (8.0 * pi4 * pi * pi / 27.0) * series::eisenstein_e6(l);
    return out;
}

WeierstrassValue weierstrass_p(cplx z, const ModuliPoint &m)
{
    const auto red = checked_reduction(z, m);
    const auto s = series::frame_sums(red.w, red.tau_r);
    const cplx W = s.cot_term;
    const cplx p_r = 2.0 * pi * pi / 3.0 + W * W + s.dwp;
    const cplx pp_r = -2.0 * (pi * pi + W * W) * W + s.dwp_prime;
    const cplx l2 = red.lambda * red.lambda;
    WeierstrassValue out;
    out.p = p_r / l2;
    out.p_prime = pp_r / (l2 * red.lambda);
    out.est_error = (s.tail + 10.0 * eps * (std::abs(p_r) + std::abs(pp_r))) / std::norm(red.lambda);
    return out;
}

cplx weierstrass_zeta(cplx z, const ModuliPoint &m)
{
    const auto red = checked_reduction(z, m);
    const auto s = series::frame_sums(red.w, red.tau_r);
    const auto inv = reduced_invariants(red.tau_r);
    const cplx zeta_r = inv.eta1 * red.w + s.cot_term + s.dzeta + red.m * inv.eta1 + red.n * inv.eta2;
    return zeta_r / red.lambda;
}

QuasiPeriods quasi_periods(const ModuliPoint &m)
{
    const auto &red = m.reduction();
    const auto inv = reduced_invariants(red.reduced_tau);
    const ModularMatrix &g = red.gamma;
    const cplx lambda = m.reduction_factor();
    // 1 / lambda = a - c tau_r and tau / lambda = d tau_r - b in the reduced lattice.
    QuasiPeriods out;
    out.eta1 = (double(g.a()) * inv.eta1 - double(g.c()) * inv.eta2) / lambda;
    out.eta2 = (double(g.d()) * inv.eta2 - double(g.b()) * inv.eta1) / lambda;
    return out;
}

LatticeData invariants_g(const ModuliPoint &m)
{
    const auto &red = m.reduction();
    const auto inv = reduced_invariants(red.reduced_tau);
    const cplx lambda = m.reduction_factor();
    const cplx l2 = lambda * lambda;
    LatticeData out;
    const auto qp = quasi_periods(m);
    out.eta1 = qp.eta1;
    out.eta2 = qp.eta2;
    out.g2 = inv.g2 / (l2 * l2);
    out.g3 = inv.g3 / (l2 * l2 * l2);
    const auto w1 = weierstrass_p(0.5, m);
    const auto w2 = weierstrass_p(0.5 * m.tau(), m);
    const auto w3 = weierstrass_p(0.5 + 0.5 * m.tau(), m);
    out.e1 = w1.p;
    out.e2 = w2.p;
    out.e3 = w3.p;
    out.est_error = std::max({w1.est_error, w2.est_error, w3.est_error}) +
                    10.0 * eps * (std::abs(out.g2) + std::abs(out.g3));
    return out;
}

} // namespace pvi
