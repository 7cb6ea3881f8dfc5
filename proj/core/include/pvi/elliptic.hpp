#ifndef PVI_ELLIPTIC_HPP
#define PVI_ELLIPTIC_HPP

#include <array>

#include "pvi/modular.hpp"

namespace pvi
{

/// Distance from the period lattice (measured after reduction) below which the
/// Weierstrass functions refuse to evaluate and throw NearSingular.
inline constexpr double near_singular_distance = 1e-8;

struct WeierstrassValue {
    cplx p;
    cplx p_prime;
    double est_error = 0;
};

struct QuasiPeriods {
    cplx eta1;
    cplx eta2;
};

/// Per-modulus constants of the lattice Z + Z tau.
struct LatticeData {
    cplx eta1, eta2;
    cplx e1, e2, e3;
    cplx g2, g3;
    double est_error = 0;
};

/// omega_0 = 0, omega_1 = 1, omega_2 = tau, omega_3 = 1 + tau.
struct HalfPeriods {
    std::array<cplx, 4> omega;
};

HalfPeriods half_periods(const ModuliPoint &m);

/// wp(z | tau) and wp'(z | tau).
///
/// z is first reduced by the modular transformation taking tau into the standard
/// fundamental domain (wp has weight 2, wp' weight 3) and then by lattice
/// translations into the period cell around 0. Throws NearSingular when the reduced
/// argument lies within near_singular_distance of 0.
WeierstrassValue weierstrass_p(cplx z, const ModuliPoint &m);

/// zeta(z | tau), with the quasi-period corrections of the lattice shifts added back.
cplx weierstrass_zeta(cplx z, const ModuliPoint &m);

/// eta1 = zeta(z + 1) - zeta(z), eta2 = zeta(z + tau) - zeta(z).
QuasiPeriods quasi_periods(const ModuliPoint &m);

/// g2, g3 from Eisenstein series, e_k = wp(omega_k / 2), eta1, eta2.
LatticeData invariants_g(const ModuliPoint &m);

/// Invariants of the reduced modulus only (no back transformation). Used by callers
/// that already work in the reduced frame.
struct ReducedInvariants {
    cplx eta1, eta2, g2, g3;
    /// g2 - 4 pi^4 / 3, computed without cancellation.
    cplx g2_small;
};

ReducedInvariants reduced_invariants(cplx tau_r);

} // namespace pvi

#endif
