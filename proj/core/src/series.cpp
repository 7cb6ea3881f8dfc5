#include "pvi/series.hpp"

#include <algorithm>
#include <cmath>

#include "pvi/errors.hpp"

namespace pvi::series
{

namespace
{

constexpr int max_terms = 2000;
constexpr double stop_ratio = 1e-18;

} // namespace

LambertSums lambert_sums(cplx q)
{
    const double aq = std::abs(q);
    if (!(aq < 1)) {
        throw DomainError("nome must satisfy |q| < 1");
    }
    LambertSums out{};
    cplx qn = 1.0;
    double last = 0;
    for (int n = 1; n <= max_terms; ++n) {
        qn *= q;
        const cplx base = qn / (1.0 - qn);
        const double dn = n;
        const cplx t1 = dn * base;
        const cplx t3 = dn * dn * t1;
        const cplx t5 = dn * dn * t3;
        out.s1 += t1;
        out.s3 += t3;
        out.s5 += t5;
        last = std::abs(t5);
        if (last <= stop_ratio * (1.0 + std::abs(out.s5)) || qn == 0.0) {
            break;
        }
    }
    // 504 is the largest multiplier applied downstream.
    out.tail = 504.0 * last * aq / (1.0 - aq) + 10.0 * 2.2e-16;
    return out;
}

cplx pi_cot(cplx w)
{
    const cplx x = pi * w;
    if (std::abs(x.imag()) < 1.0) {
        return pi / std::tan(x);
    }
    const cplx i(0, 1);
    if (x.imag() > 0) {
        // cot x = i (e + 1)/(e - 1), e = exp(2ix), |e| < 1.
        const cplx e = std::exp(2.0 * i * x);
        return pi * i * (e + 1.0) / (e - 1.0);
    }
    const cplx e = std::exp(-2.0 * i * x);
    return pi * i * (1.0 + e) / (1.0 - e);
}

FrameSums frame_sums(cplx w, cplx tau)
{
    const cplx i(0, 1);
    FrameSums out{};
    out.cot_term = pi_cot(w);

    const cplx x = std::exp(i * pi * (tau + w));
    const cplx y = std::exp(i * pi * (tau - w));
    const cplx q = std::exp(2.0 * pi * i * tau);
    const double rho = std::max(std::abs(x), std::abs(y));
    if (!(rho < 1)) {
        throw InternalError("frame series evaluated outside its convergence strip");
    }

    cplx xn = 1.0, yn = 1.0, qn = 1.0;
    cplx sz = 0.0, sp = 0.0, spp = 0.0;
    // Individual terms can vanish exactly (e.g. at half periods), so convergence is
    // judged on the a priori bound 4 n^2 rho^(2n) / (1 - |Q|) of the largest term.
    const double rho2 = rho * rho;
    const double qbound = 1.0 / (1.0 - std::abs(q));
    double r2n = 1.0;
    double last = 0;
    for (int n = 1; n <= max_terms; ++n) {
        xn *= x;
        yn *= y;
        qn *= q;
        const cplx inv = 1.0 / (1.0 - qn);
        const cplx d = xn - yn;
        const cplx e = d * (xn + yn);
        const double dn = n;
        const cplx tz = e * inv;
        const cplx tp = dn * d * d * inv;
        const cplx tpp = dn * dn * tz;
        sz += tz;
        sp += tp;
        spp += tpp;
        r2n *= rho2;
        last = 4.0 * dn * dn * r2n * qbound;
        const double scale = 1.0 + std::abs(sz) + std::abs(sp) + std::abs(spp);
        if (last <= stop_ratio * scale) {
            break;
        }
    }
    out.dzeta = -2.0 * pi * i * sz;
    out.dwp = -4.0 * pi * pi * sp;
    out.dwp_prime = -8.0 * pi * pi * pi * i * spp;
    out.tail = 8.0 * pi * pi * pi * last * rho2 / (1.0 - rho2);
    return out;
}

ReducedArgument reduce_argument(cplx z, const ModuliPoint &mp)
{
    ReducedArgument out;
    out.lambda = mp.reduction_factor();
    out.tau_r = mp.reduction().reduced_tau;
    const cplx zr = z / out.lambda;
    out.n = std::round(zr.imag() / out.tau_r.imag());
    const cplx t = zr - out.n * out.tau_r;
    out.m = std::round(t.real());
    out.w = t - out.m;
    return out;
}

} // namespace pvi::series
