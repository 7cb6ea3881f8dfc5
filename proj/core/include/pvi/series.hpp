#ifndef PVI_SERIES_HPP
#define PVI_SERIES_HPP

#include "pvi/modular.hpp"

namespace pvi::series
{

// Fourier (nome) series used by the elliptic core and the premodular forms.
//
// All sums are written so that the singular parts are carried in closed form and
// only exponentially small corrections are summed. With Q = exp(2 pi i tau):
//
//   zeta(w) - eta1 w = pi cot(pi w) + dzeta
//   wp(w)            = 2 pi^2/3 + (pi cot(pi w))^2 + dwp
//   wp'(w)           = -2 (pi^2 + (pi cot(pi w))^2) pi cot(pi w) + dwp_prime
//
// where dzeta, dwp, dwp_prime are O(Q |exp(+-2 pi i w)|). Requires |Im w| <= Im tau
// (callers keep |Im w| <= Im tau / 2 for fast convergence).

/// Lambert-type sums sum_{n>=1} n^k Q^n / (1 - Q^n) for k = 1, 3, 5.
struct LambertSums {
    cplx s1, s3, s5;
    double tail = 0;
};

LambertSums lambert_sums(cplx q);

/// E2, E4, E6 from the Lambert sums.
inline cplx eisenstein_e2(const LambertSums &l) { return 1.0 - 24.0 * l.s1; }
inline cplx eisenstein_e4(const LambertSums &l) { return 1.0 + 240.0 * l.s3; }
inline cplx eisenstein_e6(const LambertSums &l) { return 1.0 - 504.0 * l.s5; }

struct FrameSums {
    /// pi cot(pi w).
    cplx cot_term;
    cplx dzeta;
    cplx dwp;
    cplx dwp_prime;
    double tail = 0;
};

/// Corrections at the point w for the lattice Z + Z tau, where tau is given via
/// h = exp(i pi tau) (so Q = h^2).
FrameSums frame_sums(cplx w, cplx tau);

/// pi cot(pi w), stable for large |Im w|.
cplx pi_cot(cplx w);

/// z mapped into the lattice frame of the reduced modulus and then into the
/// period cell around the origin:  z / lambda = w + m + n tau_r.
struct ReducedArgument {
    cplx w;
    double m = 0;
    double n = 0;
    /// c tau + d of the reducing matrix.
    cplx lambda;
    cplx tau_r;
};

ReducedArgument reduce_argument(cplx z, const ModuliPoint &mp);

} // namespace pvi::series

#endif
