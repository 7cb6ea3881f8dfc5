#include "pvi/premodular.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pvi/elliptic.hpp"
#include "pvi/errors.hpp"
#include "pvi/parallel.hpp"
#include "pvi/series.hpp"

namespace pvi
{

namespace
{

constexpr double eps = std::numeric_limits<double>::epsilon();
const cplx I(0, 1);

bool near_half_integer(cplx x)
{
    return std::abs(x.imag()) <= 1e-12 && std::abs(2 * x.real() - std::round(2 * x.real())) <= 2e-12;
}

double frac01(double x)
{
    double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

} // namespace

bool TorsionPair::is_half_period(cplx r, cplx s)
{
    return near_half_integer(r) && near_half_integer(s);
}

TorsionPair::TorsionPair(cplx r, cplx s) : m_r(r), m_s(s)
{
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) || !std::isfinite(s.real()) ||
        !std::isfinite(s.imag())) {
        throw InvalidArgument("non-finite torsion pair");
    }
    if (is_half_period(r, s)) {
        throw Degenerate("(r, s) lies in (1/2)Z^2; Z^(2) vanishes identically or is infinite");
    }
}

TorsionPair TorsionPair::rational(std::int64_t k1, std::int64_t k2, std::int64_t N)
{
    return TorsionPair(RationalPair::normalized(k1, k2, N));
}

TorsionPair::TorsionPair(const RationalPair &p)
    : m_r(double(p.k1) / double(p.N)), m_s(double(p.k2) / double(p.N)), m_exact(p)
{
    if ((2 * p.k1) % p.N == 0 && (2 * p.k2) % p.N == 0) {
        throw Degenerate("(r, s) = (" + p.to_string() + ") lies in (1/2)Z^2");
    }
}

TorsionPair TorsionPair::reflected() const
{
    if (m_exact) {
        return rational(-m_exact->k1, -m_exact->k2, m_exact->N);
    }
    return TorsionPair(1.0 - m_r, 1.0 - m_s);
}

TorsionPair TorsionPair::transformed(const ModularMatrix &gamma) const
{
    const ModularMatrix inv = gamma.inverse();
    if (m_exact) {
        const auto v = row_times(std::array<std::int64_t, 2>{m_exact->k2, m_exact->k1}, inv);
        return rational(v[1], v[0], m_exact->N);
    }
    const auto v = row_times(std::array<cplx, 2>{m_s, m_r}, inv);
    return TorsionPair(v[1], v[0]);
}

std::string TorsionPair::to_string() const
{
    if (m_exact) {
        return "(" + m_exact->to_string() + ")";
    }
    std::ostringstream oss;
    oss.precision(17);
    oss << "(" << m_r << ", " << m_s << ")";
    return oss.str();
}

cplx ReducedFrame::wp() const
{
    return 2.0 * pi * pi / 3.0 + W * W + dwp;
}

cplx ReducedFrame::wp_prime() const
{
    return -2.0 * (pi * pi + W * W) * W + dwp_prime;
}

cplx ReducedFrame::z2() const
{
    // For sigma = +-1/2 the constant parts of W and A cancel (W -> -+i pi, A -> +-i pi)
    // and Z^(2) is O(exp(-pi Im tau)); expand around them so nothing O(1) is subtracted.
    const double sg = w.imag() > 0 ? 1.0 : -1.0;
    if (sigma.imag() == 0 && rho.imag() == 0 && 2.0 * sigma.real() == sg && std::abs(w.imag()) > 0.3) {
        const cplx j = sg * I;
        const cplx e = std::exp(2.0 * pi * j * w);
        // W = -j pi + Ws.
        const cplx Ws = 2.0 * pi * j * e / (e - 1.0);
        const cplx eps = Ws + dzeta;
        return eps * eps * eps + pi * pi * dzeta - 3.0 * pi * pi * Ws + 6.0 * j * pi * Ws * eps -
               3.0 * Ws * Ws * eps - 3.0 * dwp * eps - 6.0 * j * pi * Ws * Ws + 2.0 * Ws * Ws * Ws - dwp_prime;
    }
    return A * (3.0 * W * A + A * A - 2.0 * pi * pi) - 3.0 * dwp * (W + A) - dwp_prime;
}

double ReducedFrame::z2_magnitude() const
{
    const double a = std::abs(A), w = std::abs(W);
    return a * (3.0 * w * a + a * a + 2.0 * pi * pi) + 3.0 * std::abs(dwp) * (w + a) + std::abs(dwp_prime);
}

ReducedFrame reduced_frame(const TorsionPair &p, const ModuliPoint &m, bool allow_lattice)
{
    const Reduction &red = m.reduction();
    ReducedFrame f;
    f.tau_r = red.reduced_tau;
    f.lambda = m.reduction_factor();

    const TorsionPair q = p.transformed(red.gamma);
    cplx r = q.r(), s = q.s();
    const cplx alpha = r + s * f.tau_r;
    const double n = std::round(alpha.imag() / f.tau_r.imag());
    const double k = std::round((alpha - n * f.tau_r).real());
    f.rho = r - k;
    f.sigma = s - n;
    f.w = f.rho + f.sigma * f.tau_r;
    if (!allow_lattice && std::abs(f.w) < near_singular_distance) {
        throw NearLattice("r + s tau lies within 1e-8 of the period lattice");
    }

    const auto inv = reduced_invariants(f.tau_r);
    f.eta1 = inv.eta1;
    f.eta2 = inv.eta2;
    f.g2 = inv.g2;
    f.g3 = inv.g3;
    f.g2_small = inv.g2_small;
    if (f.w == 0.0) {
        return f;
    }
    const auto sums = series::frame_sums(f.w, f.tau_r);
    f.W = sums.cot_term;
    f.A = 2.0 * pi * I * f.sigma + sums.dzeta;
    f.dzeta = sums.dzeta;
    f.dwp = sums.dwp;
    f.dwp_prime = sums.dwp_prime;
    f.tail = sums.tail;
    return f;
}

PremodularTerms premodular_terms(const TorsionPair &p, const ModuliPoint &m)
{
    const ReducedFrame f = reduced_frame(p, m);
    const cplx l = f.lambda, l2 = l * l, l3 = l2 * l;
    PremodularTerms out;
    out.Z = f.Z() / l;
    out.wp = f.wp() / l2;
    out.wp_prime = f.wp_prime() / l3;
    out.z2 = f.z2() / l3;
    out.scale = f.z2_magnitude() / std::abs(l3);
    const double zr = std::abs(f.Z());
    out.est_error = 20.0 * eps * out.scale + f.tail * (3.0 + 3.0 * zr) / std::abs(l3);
    return out;
}

cplx hecke_Z(const TorsionPair &p, const ModuliPoint &m)
{
    const ReducedFrame f = reduced_frame(p, m);
    return f.Z() / f.lambda;
}

cplx hecke_Z_direct(const TorsionPair &p, const ModuliPoint &m)
{
    const cplx alpha = p.r() + p.s() * m.tau();
    cplx zeta;
    try {
        zeta = weierstrass_zeta(alpha, m);
    } catch (const NearSingular &e) {
        throw NearLattice(e.what());
    }
    const auto qp = quasi_periods(m);
    return zeta - p.r() * qp.eta1 - p.s() * qp.eta2;
}

cplx z2(const TorsionPair &p, const ModuliPoint &m)
{
    const ReducedFrame f = reduced_frame(p, m);
    return f.z2() / (f.lambda * f.lambda * f.lambda);
}

cplx z2_direct(const TorsionPair &p, const ModuliPoint &m)
{
    const cplx Z = hecke_Z_direct(p, m);
    const auto w = weierstrass_p(p.r() + p.s() * m.tau(), m);
    return Z * Z * Z - 3.0 * w.p * Z - w.p_prime;
}

ProductValue m_n(std::int64_t N, const ModuliPoint &m, int threads)
{
    if (N < 3) {
        throw InvalidArgument("M_N needs N >= 3");
    }
    const auto pairs = enumerate_qn(N);
    std::vector<cplx> factors(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) { factors[i] = z2(TorsionPair(pairs[i]), m); });

    ProductValue out;
    out.factors = int(factors.size());
    double arg = 0;
    for (const cplx &f : factors) {
        out.log_abs += std::log(std::abs(f));
        arg += std::arg(f);
    }
    out.arg = std::remainder(arg, 2 * pi);
    if (out.arg <= -pi) {
        out.arg += 2 * pi;
    }
    if (out.log_abs < 700.0) {
        out.value = std::polar(std::exp(out.log_abs), out.arg);
    }
    return out;
}

CuspAsymptotic cusp_asymptotic(const TorsionPair &p)
{
    if (!p.is_real()) {
        throw InvalidArgument("cusp asymptotics need a real pair");
    }
    double r, s;
    bool s_zero, s_half;
    if (const auto &e = p.exact()) {
        r = double(e->k1) / double(e->N);
        s = double(e->k2) / double(e->N);
        s_zero = e->k2 == 0;
        s_half = 2 * e->k2 == e->N;
    } else {
        r = frac01(p.r().real());
        s = frac01(p.s().real());
        if (s > 1 - 1e-12) {
            s = 0;
        }
        s_zero = s <= 1e-12;
        s_half = std::abs(s - 0.5) <= 1e-12;
    }
    const double pi3 = pi * pi * pi;
    if (s_zero) {
        return {-48.0 * pi3 * std::sin(2 * pi * r), 1.0};
    }
    if (s_half) {
        return {-12.0 * pi3 * std::sin(2 * pi * r), 0.5};
    }
    return {4.0 * pi3 * I * s * (1 - s) * (2 * s - 1), 0.0};
}

Numerator solution_numerator(const TorsionPair &p, const ModuliPoint &m)
{
    const auto t = premodular_terms(p, m);
    const cplx l = m.reduction_factor();
    const cplx g2 = reduced_invariants(m.reduction().reduced_tau).g2 / (l * l * l * l);
    Numerator out;
    out.value = 3.0 * t.wp_prime * t.Z * t.Z + (12.0 * t.wp * t.wp - g2) * t.Z + 3.0 * t.wp * t.wp_prime;
    const double z = std::abs(t.Z), w = std::abs(t.wp), wp1 = std::abs(t.wp_prime);
    out.scale = 3.0 * wp1 * z * z + (12.0 * w * w + std::abs(g2)) * z + 3.0 * w * wp1;
    return out;
}

} // namespace pvi
