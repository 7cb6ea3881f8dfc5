#include "pvi/painleve.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "pvi/elliptic.hpp"
#include "pvi/errors.hpp"

namespace pvi
{

namespace
{

struct Lattice3 {
    cplx e1, e2, e3;
};

Lattice3 half_period_values(const ModuliPoint &m)
{
    const auto l = invariants_g(m);
    return {l.e1, l.e2, l.e3};
}

// N2 = 2 wp(w) Z^(2) + numerator, written as a cubic in W with coefficients that
// stay bounded as w -> 0 and as Im tau -> oo.
cplx n2_polynomial(const ReducedFrame &f)
{
    const cplx W = f.W, A = f.A, P = f.dwp, D = f.dwp_prime, G = f.g2_small;
    const double p2 = pi * pi, p4 = p2 * p2;
    const cplx A2 = A * A, A3 = A2 * A;
    const cplx k3 = 12.0 * P;
    const cplx k2 = 2.0 * A3 + 18.0 * A * P + 4.0 * D;
    const cplx k1 = 6.0 * A2 * P - 2.0 * p2 * A2 + 6.0 * A * D - G + 6.0 * P * P + 6.0 * p2 * P;
    const cplx k0 = 2.0 * A3 * P + 4.0 * p2 * A3 / 3.0 + 3.0 * A2 * D - A * G + 6.0 * A * P * P + 8.0 * p2 * A * P +
                    4.0 * p4 * A / 3.0 + D * P + 2.0 * p2 * D / 3.0;
    return ((k3 * W + k2) * W + k1) * W + k0;
}

// Laurent expansion of the solution formula in w, with Z = zeta(w) - c.
cplx laurent_wp(cplx w, cplx c, cplx g2, cplx g3)
{
    const cplx c2 = c * c, c4 = c2 * c2, c6 = c4 * c2;
    return -c / (3.0 * w) - c2 / 9.0 - (c4 + 3.0 * g2) / (27.0 * c) * w -
           (4.0 * c6 - 21.0 * c2 * g2 - 54.0 * g3) / (324.0 * c2) * w * w;
}

cplx fd4(const std::function<cplx(cplx)> &f, cplx x, double h)
{
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

int mod2(std::int64_t x)
{
    return int(((x % 2) + 2) % 2);
}

} // namespace

cplx t_of_tau(const ModuliPoint &m)
{
    const auto e = half_period_values(m);
    return (e.e3 - e.e1) / (e.e2 - e.e1);
}

namespace
{

WpValue evaluate_wp(const TorsionPair &p, const ModuliPoint &m, std::optional<WpPath> forced)
{
    const ReducedFrame f = reduced_frame(p, m, true);
    const cplx l2 = f.lambda * f.lambda;
    WpValue out;
    out.lattice_distance = std::abs(f.w);
    if (f.w == 0.0) {
        out.infinite = true;
        out.path = WpPath::Expansion;
        return out;
    }
    const cplx c = f.rho * f.eta1 + f.sigma * f.eta2;
    const bool near = out.lattice_distance < expansion_radius && std::abs(c) > 1e-3;
    if (forced ? *forced == WpPath::Expansion : near) {
        if (std::abs(c) == 0.0) {
            throw InvalidArgument("the expansion path needs r eta1 + s eta2 != 0");
        }
        out.path = WpPath::Expansion;
        out.value = laurent_wp(f.w, c, f.g2, f.g3) / l2;
        return out;
    }
    const cplx z2r = f.z2();
    if (std::abs(z2r) <= 1e-12 * f.z2_magnitude()) {
        out.infinite = true;
        return out;
    }
    out.value = n2_polynomial(f) / (2.0 * z2r) / l2;
    return out;
}

} // namespace

WpValue wp_of_p(const TorsionPair &p, const ModuliPoint &m)
{
    return evaluate_wp(p, m, std::nullopt);
}

WpValue wp_of_p(const TorsionPair &p, const ModuliPoint &m, WpPath path)
{
    return evaluate_wp(p, m, path);
}

BranchNote branch_note(const ModuliPoint &m)
{
    const auto red = reduce_to_domain_F(m.tau());
    const ModularMatrix g = red.gamma.inverse();
    const ModularMatrix S = ModularMatrix::inversion(), T = ModularMatrix::translation(1);
    const ModularMatrix Si = S.inverse();
    const std::array<std::pair<ModularMatrix, const char *>, 6> reps{{
        {ModularMatrix(), "F"},
        {S, "SF"},
        {S * T, "STF"},
        {S * S * T, "S^2TF"},
        {T * Si, "TS^-1F"},
        {S * T * Si, "STS^-1F"},
    }};
    auto key = [](const ModularMatrix &x) {
        return std::array<int, 4>{mod2(x.a()), mod2(x.b()), mod2(x.c()), mod2(x.d())};
    };
    BranchNote note;
    const auto k = key(g);
    note.gamma_mod2 = k;
    note.tau_in_F = red.reduced_tau;
    for (const auto &[rep, label] : reps) {
        if (key(rep) == k) {
            note.label = label;
        }
    }
    return note;
}

SolutionValue lambda_rs(const TorsionPair &p, const ModuliPoint &m)
{
    const auto e = half_period_values(m);
    const auto wp = wp_of_p(p, m);
    SolutionValue out{m};
    out.alpha = p.r() + p.s() * m.tau();
    out.e1 = e.e1;
    out.e2 = e.e2;
    out.e3 = e.e3;
    out.t = (e.e3 - e.e1) / (e.e2 - e.e1);
    out.wp_p = wp.value;
    out.wp_infinite = wp.infinite;
    out.path = wp.path;
    out.lambda_infinite = wp.infinite;
    out.is_pole = wp.infinite;
    if (!wp.infinite) {
        out.lambda = (wp.value - e.e1) / (e.e2 - e.e1);
    }
    out.branch = branch_note(m);
    return out;
}

PoleExpansion pole_expansion(const TorsionPair &p, const ModuliPoint &m)
{
    const cplx tau = m.tau();
    const cplx alpha = p.r() + p.s() * tau;
    const double n = std::round(alpha.imag() / tau.imag());
    const double k = std::round((alpha - n * tau).real());
    const cplx r = p.r() - k, s = p.s() - n;

    PoleExpansion out;
    const auto qp = quasi_periods(m);
    out.c0 = r * qp.eta1 + s * qp.eta2;
    const double h = 1e-4 * std::max(1.0, std::abs(tau)) * std::min(1.0, tau.imag());
    const cplx d1 = fd4([](cplx t) { return quasi_periods(ModuliPoint(t)).eta1; }, tau, h);
    const cplx d2 = fd4([](cplx t) { return quasi_periods(ModuliPoint(t)).eta2; }, tau, h);
    out.c1 = s == 0.0 ? cplx(std::nan(""), std::nan("")) : (r / s) * d1 + d2;
    out.alpha = r + s * tau;
    if (out.alpha == 0.0) {
        out.leading_infinite = true;
    } else {
        out.leading = -out.c0 / (3.0 * out.alpha);
    }
    return out;
}

std::string to_string(PoleKind k)
{
    switch (k) {
    case PoleKind::None:
        return "none";
    case PoleKind::Lattice:
        return "lattice";
    case PoleKind::Z2Zero:
        return "z2-zero";
    }
    return "?";
}

PoleTestResult pole_test(const TorsionPair &p, const ModuliPoint &m, double tol)
{
    const ReducedFrame f = reduced_frame(p, m, true);
    PoleTestResult out;
    if (std::abs(f.w) < near_singular_distance) {
        out.is_pole = true;
        out.kind = PoleKind::Lattice;
        out.expansion = pole_expansion(p, m);
        return out;
    }
    const auto t = premodular_terms(p, m);
    out.relative_z2 = std::abs(t.z2) / t.scale;
    if (out.relative_z2 <= tol) {
        out.is_pole = true;
        out.kind = PoleKind::Z2Zero;
        const DomainKind region = DomainSpec::make(DomainKind::F0).contains(m.tau()) ? DomainKind::F0 : DomainKind::F2;
        out.certificate = newton_refine(p, m.tau(), region);
        return out;
    }
    if (out.relative_z2 <= 10 * tol) {
        throw Inconclusive("|Z^(2)| / scale = " + std::to_string(out.relative_z2) +
                           " lies inside the undecided band above tol");
    }
    return out;
}

SymmetryResiduals symmetry_check(std::int64_t N, const ModuliPoint &m)
{
    if (N < 3) {
        throw InvalidArgument("symmetry check needs N >= 3");
    }
    const cplx tau = m.tau();
    const auto base = lambda_rs(TorsionPair::rational(0, 1, N), m);
    const auto a = lambda_rs(TorsionPair::rational(1, 0, N), ModuliPoint(-1.0 / tau));
    const auto c = lambda_rs(TorsionPair::rational(1, 1, N), ModuliPoint(tau - 1.0));
    SymmetryResiduals out;
    out.first = std::abs(a.lambda - (1.0 - base.lambda));
    out.second = std::abs(c.lambda - base.lambda / base.t);
    return out;
}

} // namespace pvi
