#ifndef PVI_PAINLEVE_HPP
#define PVI_PAINLEVE_HPP

#include <array>
#include <optional>
#include <string>

#include "pvi/modular.hpp"
#include "pvi/premodular.hpp"
#include "pvi/zeros.hpp"

namespace pvi
{

/// Distance |alpha - Lambda| (in the reduced frame) below which wp_of_p uses the
/// Laurent expansion around the lattice point instead of the closed formula.
inline constexpr double expansion_radius = 1e-6;

/// t(tau) = (e3 - e1) / (e2 - e1).
cplx t_of_tau(const ModuliPoint &m);

enum class WpPath { Direct, Expansion };

struct WpValue {
    cplx value;
    bool infinite = false;
    WpPath path = WpPath::Direct;
    /// |w|, the distance of alpha from the lattice in the reduced frame.
    double lattice_distance = 0;
};

/// wp(p_{r,s}(tau) | tau) from the solution formula
///   wp(alpha) + [3 wp' Z^2 + (12 wp^2 - g2) Z + 3 wp wp'] / (2 Z^(2)).
/// Evaluated in the reduced frame as a single quotient whose terms do not cancel.
WpValue wp_of_p(const TorsionPair &p, const ModuliPoint &m);

/// Same, but on the given path regardless of the distance to the lattice.
WpValue wp_of_p(const TorsionPair &p, const ModuliPoint &m, WpPath path);

/// Which of the six SL(2, Z)/Gamma(2) copies of F contains tau: the reducing
/// matrix into F modulo 2, and a short label.
struct BranchNote {
    /// Entries a, b, c, d of the matrix taking F onto the copy, reduced mod 2.
    std::array<int, 4> gamma_mod2{};
    cplx tau_in_F;
    std::string label;
};

BranchNote branch_note(const ModuliPoint &m);

struct SolutionValue {
    ModuliPoint tau;
    cplx alpha{};
    cplx t{};
    cplx e1{}, e2{}, e3{};
    cplx wp_p{};
    bool wp_infinite = false;
    cplx lambda{};
    bool lambda_infinite = false;
    bool is_pole = false;
    WpPath path = WpPath::Direct;
    BranchNote branch{};
};

/// lambda_{r,s}(t) = (wp(p(tau)) - e1) / (e2 - e1) together with t(tau).
SolutionValue lambda_rs(const TorsionPair &p, const ModuliPoint &m);

struct PoleExpansion {
    /// r eta1 + s eta2 at tau, for the pair shifted by Z^2 so that r + s tau is the
    /// offset from the nearest lattice point (-2 pi i s exactly on the lattice).
    cplx c0;
    /// (r/s) eta1'(tau) + eta2'(tau).
    cplx c1;
    /// alpha minus the nearest lattice point.
    cplx alpha;
    /// -c0 / (3 alpha); infinite when alpha is exactly on the lattice.
    cplx leading;
    bool leading_infinite = false;
};

PoleExpansion pole_expansion(const TorsionPair &p, const ModuliPoint &m);

enum class PoleKind { None, Lattice, Z2Zero };

std::string to_string(PoleKind k);

struct PoleTestResult {
    bool is_pole = false;
    PoleKind kind = PoleKind::None;
    /// |Z^(2)(tau)| / natural scale (not set for lattice poles).
    double relative_z2 = 0;
    std::optional<PoleExpansion> expansion;
    std::optional<ZeroCertificate> certificate;
};

/// Decides whether t(tau) is a pole of lambda_{r,s}. A lattice pole is reported when
/// r + s tau is within the singular distance of the lattice. Otherwise the
/// decision is |Z^(2)| <= tol * scale (scale: natural size of the terms of Z^(2));
/// values in (tol, 10 tol] * scale throw Inconclusive. For a Z^(2) zero, Newton
/// refinement from tau supplies the certificate.
PoleTestResult pole_test(const TorsionPair &p, const ModuliPoint &m, double tol = 1e-9);

struct SymmetryResiduals {
    /// lambda_{1/N,0}(1 - t) - (1 - lambda_{0,1/N}(t)), via tau' = -1/tau.
    double first = 0;
    /// lambda_{1/N,1/N}(1/t) - lambda_{0,1/N}(t)/t, via tau' = tau - 1.
    double second = 0;
};

SymmetryResiduals symmetry_check(std::int64_t N, const ModuliPoint &m);

} // namespace pvi

#endif
