#ifndef PVI_PREMODULAR_HPP
#define PVI_PREMODULAR_HPP

#include <optional>
#include <string>

#include "pvi/modular.hpp"
#include "pvi/torsion.hpp"

namespace pvi
{

/// A parameter pair (r, s). Real or complex; rational pairs also keep their exact
/// numerators. Pairs in (1/2)Z^2 are rejected with Degenerate on construction.
class TorsionPair
{
public:
    TorsionPair(cplx r, cplx s);
    TorsionPair(double r, double s) : TorsionPair(cplx(r), cplx(s)) {}
    /// (k1/N, k2/N); any integers, reduced mod N.
    static TorsionPair rational(std::int64_t k1, std::int64_t k2, std::int64_t N);
    explicit TorsionPair(const RationalPair &p);

    cplx r() const noexcept { return m_r; }
    cplx s() const noexcept { return m_s; }
    bool is_real() const noexcept { return m_r.imag() == 0 && m_s.imag() == 0; }
    const std::optional<RationalPair> &exact() const noexcept { return m_exact; }

    /// (1 - r, 1 - s), exact when possible.
    TorsionPair reflected() const;
    /// The pair (r', s') with (s', r') = (s, r) . gamma^-1, exact when possible.
    TorsionPair transformed(const ModularMatrix &gamma) const;

    std::string to_string() const;

    /// True when (r, s) lies in (1/2)Z^2 (exactly for rational pairs, to 1e-12 otherwise).
    static bool is_half_period(cplx r, cplx s);

private:
    cplx m_r, m_s;
    std::optional<RationalPair> m_exact;
};

/// Ingredients of Z and Z^(2) in the frame of the reduced modulus.
///
/// With tau_r = gamma . tau and lambda = c tau + d, the pair is moved to
/// (s', r') = (s, r) . gamma^-1 and then shifted by integers so that
/// w = rho + sigma tau_r is the representative of alpha nearest to 0. In that frame
///
///   Z        = W + A,                 A = 2 pi i sigma + dzeta
///   wp(w)    = 2 pi^2/3 + W^2 + dwp
///   wp'(w)   = -2 (pi^2 + W^2) W + dwp'
///   Z^(2)    = A (3 W A + A^2 - 2 pi^2) - 3 dwp (W + A) - dwp'
///
/// with W = pi cot(pi w). Every term is either bounded or carries its own
/// singularity, so nothing cancels at the cusp.
struct ReducedFrame {
    cplx lambda;
    cplx tau_r;
    cplx w;
    cplx rho, sigma;
    cplx W, A, dwp, dwp_prime;
    /// A = 2 pi i sigma + dzeta; kept apart because it can be far below |A|.
    cplx dzeta;
    /// Invariants of tau_r; g2_small = g2 - 4 pi^4 / 3.
    cplx eta1, eta2, g2, g3, g2_small;
    double tail = 0;

    cplx Z() const { return W + A; }
    cplx wp() const;
    cplx wp_prime() const;
    cplx z2() const;
    /// Sum of the magnitudes of the terms of z2(); the size rounding errors scale with.
    double z2_magnitude() const;
};

/// Throws NearLattice when |w| < near_singular_distance unless allow_lattice is set.
ReducedFrame reduced_frame(const TorsionPair &p, const ModuliPoint &m, bool allow_lattice = false);

/// Z, wp(alpha), wp'(alpha), Z^(2) in the original frame, and the natural magnitude
/// scale against which Z^(2) is judged: the summed magnitudes of the terms of the
/// cancellation-free form of Z^(2), carried back by |c tau + d|^-3. Away from the
/// lattice this is comparable to |Z|^3 + 3 |wp| |Z| + |wp'|; near it, it does not
/// blow up like |alpha|^-3 the way those terms do.
struct PremodularTerms {
    cplx Z, wp, wp_prime, z2;
    double scale = 0;
    double est_error = 0;
};

PremodularTerms premodular_terms(const TorsionPair &p, const ModuliPoint &m);

/// Z_{r,s}(tau) = zeta(r + s tau) - r eta1 - s eta2.
cplx hecke_Z(const TorsionPair &p, const ModuliPoint &m);
/// The same through weierstrass_zeta and quasi_periods directly.
cplx hecke_Z_direct(const TorsionPair &p, const ModuliPoint &m);

/// Z^(2)_{r,s}(tau) = Z^3 - 3 wp(r + s tau) Z - wp'(r + s tau).
cplx z2(const TorsionPair &p, const ModuliPoint &m);
/// The defining cubic evaluated from hecke_Z_direct and weierstrass_p. Loses
/// accuracy near cusps; kept as an independent check.
cplx z2_direct(const TorsionPair &p, const ModuliPoint &m);

/// M_N(tau) = product of Z^(2) over Q_N, accumulated in log space.
struct ProductValue {
    double log_abs = 0;
    /// In (-pi, pi].
    double arg = 0;
    /// exp(log_abs + i arg) when representable.
    std::optional<cplx> value;
    int factors = 0;
};

/// threads == 0 picks the hardware concurrency. Factors are always combined in
/// the sorted order of Q_N, so the result does not depend on the thread count.
ProductValue m_n(std::int64_t N, const ModuliPoint &m, int threads = 1);

struct CuspAsymptotic {
    cplx leading;
    /// 0, 1/2 or 1.
    double q_order = 0;
};

/// Leading behaviour of Z^(2)_{r,s}(tau) as tau -> i infinity for real pairs,
/// with r, s reduced mod 1 into [0, 1).
CuspAsymptotic cusp_asymptotic(const TorsionPair &p);

/// Numerator 3 wp' Z^2 + (12 wp^2 - g2) Z + 3 wp wp' of the solution formula and
/// its natural scale.
struct Numerator {
    cplx value;
    double scale = 0;
};

Numerator solution_numerator(const TorsionPair &p, const ModuliPoint &m);

} // namespace pvi

#endif
