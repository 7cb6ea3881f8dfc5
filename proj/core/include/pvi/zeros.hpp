#ifndef PVI_ZEROS_HPP
#define PVI_ZEROS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pvi/modular.hpp"
#include "pvi/premodular.hpp"

namespace pvi
{

enum class DomainKind { F0, F, F2 };

std::string to_string(DomainKind k);
/// "F0", "F", "F2"; throws InvalidArgument otherwise.
DomainKind parse_domain(const std::string &s);

/// A fundamental domain truncated at height T (in the frame of each cusp).
///
/// F0 = {0 <= Re <= 1, |tau - 1/2| >= 1/2}            cusps oo, 0, 1
/// F  = {0 <= Re < 1, |tau| >= 1, |tau - 1| > 1}        cusp oo
/// F2 = {0 <= Re <= 2, |tau - 1/2| >= 1/2, |tau - 3/2| >= 1/2}  cusps oo, 0, 1, 2
///
/// truncation_height is the height used at every cusp where the pair in that
/// cusp's frame has positive q-order. Where the order is zero the height is raised
/// for the pair at hand until the leading constant dominates the exponential
/// corrections, so that no zero is lost above the cap.
struct DomainSpec {
    DomainKind kind = DomainKind::F0;
    double truncation_height = 10.0;

    static DomainSpec make(DomainKind kind, double T = 10.0);
    /// Closed membership test (ignores the truncation).
    bool contains(cplx tau, double slack = 0.0) const;
    /// Finite cusps of the domain (the cusp at infinity is implicit).
    std::vector<int> finite_cusps() const;
};

/// Moves the cusp x to infinity: sigma = -1/(tau - x).
ModularMatrix cusp_matrix(int x);

/// Height needed in the frame of a cusp, given the pair seen from that cusp.
double cusp_height(const TorsionPair &pair_in_cusp_frame, double T_default);

enum class TrianglePosition { Delta0, Delta1, Delta2, Delta3, Boundary, Outside };

std::string to_string(TrianglePosition t);

/// Triangles of [0, 1] x [0, 1/2]:
///   Delta0: 0 < r, s < 1/2, r + s > 1/2
///   Delta1: 1/2 < r < 1, 0 < s < 1/2, r + s > 1
///   Delta2: 1/2 < r < 1, 0 < s < 1/2, r + s < 1
///   Delta3: r, s > 0, r + s < 1/2
/// Rational pairs are classified exactly; real pairs within 1e-12 of an edge are
/// reported as Boundary.
TrianglePosition classify_triangle(const TorsionPair &p);

/// The representative of {p, -p} + Z^2 in [0, 1) x [0, 1/2].
TorsionPair reduce_to_triangle_window(const TorsionPair &p);

struct WindingResult {
    int winding = 0;
    /// Total phase change divided by 2 pi.
    double turns = 0;
    int samples = 0;
    /// Smallest |Z^(2)| / scale met on the contour.
    double min_relative = 0;
};

struct ContourOptions {
    int initial_samples = 32;
    double max_phase_step = pi / 8;
    /// BoundaryTooClose below this fraction of the local scale.
    double boundary_floor = 1e-8;
    int max_bisections = 40;
};

/// Number of zeros of Z^(2)_{r,s} inside the truncated domain, by the argument
/// principle along the whole closed boundary (cap included).
WindingResult winding_count(const TorsionPair &p, const DomainSpec &d, const ContourOptions &opt = {});

struct ZeroCertificate {
    cplx tau0;
    /// |Z^(2)(tau0)| and |dZ^(2)/dtau(tau0)|.
    double residual = 0;
    double dz_mag = 0;
    /// Natural magnitude of the terms of Z^(2) at tau0.
    double scale = 0;
    int newton_iters = 0;
    DomainKind region = DomainKind::F0;
    TorsionPair torsion;
    /// Size of the numerator of the solution formula relative to its own scale.
    double numerator_relative = 0;
};

/// dZ^(2)/dtau by a fourth-order central difference with step h.
cplx z2_derivative(const TorsionPair &p, cplx tau, double h = 1e-6);

/// Newton iteration for Z^(2)_{r,s}(tau) = 0 from tau_start. Throws NewtonStall
/// if the residual target of 1e-12 * scale is not met within max_iter steps.
ZeroCertificate newton_refine(const TorsionPair &p, cplx tau_start, DomainKind region, int max_iter = 50);

struct LocateOptions {
    ContourOptions contour;
    int max_depth = 24;
    /// Cells with winding 1 whose Newton iteration leaves the cell are split until
    /// they are smaller than this (in the frame of the cell).
    double min_cell = 1e-9;
};

/// All zeros of Z^(2)_{r,s} in the truncated domain. The count must equal
/// winding_count; otherwise InternalError.
std::vector<ZeroCertificate> locate_zeros(const TorsionPair &p, const DomainSpec &d, const LocateOptions &opt = {});

struct MergeAmbiguity {
    cplx tau;
    RationalPair a, b;
};

struct MnZeroCount {
    std::int64_t N = 0;
    DomainKind domain = DomainKind::F;
    /// With multiplicity (each +- pair of Q_N contributes 2).
    std::int64_t interior_count = 0;
    std::vector<ZeroCertificate> certificates;
    /// Zeros of non-+- related pairs closer than 1e-8.
    std::vector<MergeAmbiguity> ambiguities;
    /// F only: how often each zero in F was reached from the F0 searches
    /// (3 per zero when the bookkeeping is consistent).
    std::vector<int> hits;
};

/// Zeros of M_N in F (via F0 and SL(2,Z) reduction) or in F2 (directly).
MnZeroCount count_mn_zeros(std::int64_t N, const DomainSpec &d = DomainSpec::make(DomainKind::F), int threads = 1);

struct ValenceReport {
    std::int64_t N = 0;
    std::int64_t interior = 0;
    std::int64_t cusp_formula = 0;
    double cusp_numeric = 0;
    std::int64_t total = 0;
    std::int64_t qn_over_4 = 0;
    bool balanced = false;
    bool cusp_agrees = false;
    /// log|M_N| at i and rho; both finite means nu_i = nu_rho = 0.
    double log_abs_at_i = 0;
    double log_abs_at_rho = 0;
};

ValenceReport valence_check(std::int64_t N, int threads = 1);

} // namespace pvi

#endif
