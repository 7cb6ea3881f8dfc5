#include "pvi/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pvi/errors.hpp"
#include "pvi/parallel.hpp"

namespace pvi
{

namespace
{

double frac01(double x)
{
    const double f = x - std::floor(x);
    return f >= 1.0 ? 0.0 : f;
}

double wrap_phase(double d)
{
    d = std::remainder(d, 2 * pi);
    return d;
}

// A cusp of the domain: x (or infinity), its frame matrix and the q-order of the
// pair seen from it.
struct Cusp {
    bool at_infinity = true;
    int x = 0;
    ModularMatrix gamma;
    double order = 0;
    double height = 10;
};

std::vector<Cusp> domain_cusps(const TorsionPair &p, const DomainSpec &d)
{
    std::vector<Cusp> out;
    Cusp inf;
    inf.order = cusp_asymptotic(p).q_order;
    inf.height = cusp_height(p, d.truncation_height);
    out.push_back(inf);
    for (int x : d.finite_cusps()) {
        Cusp c;
        c.at_infinity = false;
        c.x = x;
        c.gamma = cusp_matrix(x);
        const TorsionPair q = p.transformed(c.gamma);
        c.order = cusp_asymptotic(q).q_order;
        c.height = cusp_height(q, d.truncation_height);
        out.push_back(c);
    }
    return out;
}

// The natural scale of Z^(2) shrinks like q^order near a cusp of positive order;
// fold that decay in so the boundary test compares like with like.
double decay_factor(const std::vector<Cusp> &cusps, cplx tau)
{
    double f = 1.0;
    for (const auto &c : cusps) {
        if (c.order > 0) {
            const double y = c.gamma.act(tau).imag();
            f *= std::min(1.0, std::exp(-2 * pi * c.order * y));
        }
    }
    return f;
}

struct Evaluation {
    cplx value;
    double scale;
};

// Z^(2) of `pair` at `sigma`, where sigma = frame . tau and tau is the point in the
// coordinates of the original pair.
Evaluation evaluate(const TorsionPair &pair, cplx sigma, const ModularMatrix &frame, const std::vector<Cusp> &cusps)
{
    const auto t = premodular_terms(pair, ModuliPoint(sigma));
    const cplx tau = frame.inverse().act(sigma);
    return {t.z2, t.scale * decay_factor(cusps, tau)};
}

using Path = std::function<cplx(double)>;

Path vertical(double x, double y0, double y1)
{
    const double a = std::log(y0), b = std::log(y1);
    return [=](double t) { return cplx(x, std::exp(a + t * (b - a))); };
}

Path horizontal(double y, double x0, double x1)
{
    return [=](double t) { return cplx(x0 + t * (x1 - x0), y); };
}

// tau = x - 1/(u + i y) with u fixed and y running geometrically.
Path cusp_line(int x, double u, double y0, double y1)
{
    const double a = std::log(y0), b = std::log(y1);
    return [=](double t) { return double(x) - 1.0 / cplx(u, std::exp(a + t * (b - a))); };
}

// tau = x - 1/(u + i y) with y fixed and u running linearly.
Path horocycle(int x, double y, double u0, double u1)
{
    return [=](double t) { return double(x) - 1.0 / cplx(u0 + t * (u1 - u0), y); };
}

Path arc(cplx centre, double th0, double th1)
{
    return [=](double t) { return centre + std::polar(1.0, th0 + t * (th1 - th0)); };
}

class PhaseTracker
{
public:
    PhaseTracker(const ContourOptions &opt, std::function<Evaluation(cplx)> eval)
        : m_opt(opt), m_eval(std::move(eval))
    {}

    double track(const Path &path)
    {
        const int n = std::max(2, m_opt.initial_samples);
        double t0 = 0;
        cplx f0 = sample(path(0.0));
        double total = 0;
        for (int k = 1; k <= n; ++k) {
            const double t1 = double(k) / n;
            const cplx f1 = sample(path(t1));
            total += refine(path, t0, f0, t1, f1, 0);
            t0 = t1;
            f0 = f1;
        }
        return total;
    }

    int samples = 0;
    double min_relative = 1e300;

private:
    cplx sample(cplx tau)
    {
        const Evaluation e = m_eval(tau);
        ++samples;
        const double rel = std::abs(e.value) / e.scale;
        min_relative = std::min(min_relative, rel);
        if (!(rel >= m_opt.boundary_floor)) {
            throw BoundaryTooClose("|Z^(2)| = " + std::to_string(rel) + " x scale on the contour near tau = (" +
                                   std::to_string(tau.real()) + ", " + std::to_string(tau.imag()) + ")");
        }
        return e.value;
    }

    double refine(const Path &path, double ta, cplx fa, double tb, cplx fb, int depth)
    {
        const double d = wrap_phase(std::arg(fb) - std::arg(fa));
        if (std::abs(d) <= m_opt.max_phase_step) {
            return d;
        }
        if (depth >= m_opt.max_bisections) {
            throw IncoherentWinding("phase change along the contour could not be resolved");
        }
        const double tm = 0.5 * (ta + tb);
        const cplx fm = sample(path(tm));
        return refine(path, ta, fa, tm, fm, depth + 1) + refine(path, tm, fm, tb, fb, depth + 1);
    }

    ContourOptions m_opt;
    std::function<Evaluation(cplx)> m_eval;
};

std::vector<Path> boundary_paths(const DomainSpec &d, const std::vector<Cusp> &cusps)
{
    const double T = cusps[0].height;
    auto height_of = [&](int x) {
        for (const auto &c : cusps) {
            if (!c.at_infinity && c.x == x) {
                return c.height;
            }
        }
        throw InternalError("missing cusp");
    };
    std::vector<Path> out;
    switch (d.kind) {
    case DomainKind::F0: {
        const double T0 = height_of(0), T1 = height_of(1);
        out = {cusp_line(0, -1, T0, 1),       cusp_line(1, 1, 1, T1), horocycle(1, T1, 1, 0),
               vertical(1, 1 / T1, T),        horizontal(T, 1, 0),    vertical(0, T, 1 / T0),
               horocycle(0, T0, 0, -1)};
        break;
    }
    case DomainKind::F:
        out = {arc(0.0, pi / 2, pi / 3), arc(1.0, 2 * pi / 3, pi / 2), vertical(1, 1, T), horizontal(T, 1, 0),
               vertical(0, T, 1)};
        break;
    case DomainKind::F2: {
        const double T0 = height_of(0), T1 = height_of(1), T2 = height_of(2);
        out = {cusp_line(0, -1, T0, 1), cusp_line(1, 1, 1, T1),  horocycle(1, T1, 1, -1),
               cusp_line(1, -1, T1, 1), cusp_line(2, 1, 1, T2),  horocycle(2, T2, 1, 0),
               vertical(2, 1 / T2, T),  horizontal(T, 2, 0),     vertical(0, T, 1 / T0),
               horocycle(0, T0, 0, -1)};
        break;
    }
    }
    return out;
}

void require_real(const TorsionPair &p)
{
    if (!p.is_real()) {
        throw InvalidArgument("zero counting is implemented for real pairs only");
    }
}

} // namespace

std::string to_string(DomainKind k)
{
    switch (k) {
    case DomainKind::F0:
        return "F0";
    case DomainKind::F:
        return "F";
    case DomainKind::F2:
        return "F2";
    }
    return "?";
}

DomainKind parse_domain(const std::string &s)
{
    if (s == "F0") {
        return DomainKind::F0;
    }
    if (s == "F") {
        return DomainKind::F;
    }
    if (s == "F2") {
        return DomainKind::F2;
    }
    throw InvalidArgument("unknown domain '" + s + "' (expected F0, F or F2)");
}

DomainSpec DomainSpec::make(DomainKind kind, double T)
{
    if (!(T >= 5.0)) {
        throw InvalidArgument("truncation height must be at least 5");
    }
    return {kind, T};
}

bool DomainSpec::contains(cplx tau, double slack) const
{
    const double x = tau.real();
    if (tau.imag() <= 0) {
        return false;
    }
    switch (kind) {
    case DomainKind::F0:
        return x >= -slack && x <= 1 + slack && std::abs(tau - 0.5) >= 0.5 - slack;
    case DomainKind::F:
        return x >= -slack && x <= 1 + slack && std::abs(tau) >= 1 - slack && std::abs(tau - 1.0) >= 1 - slack;
    case DomainKind::F2:
        return x >= -slack && x <= 2 + slack && std::abs(tau - 0.5) >= 0.5 - slack &&
               std::abs(tau - 1.5) >= 0.5 - slack;
    }
    return false;
}

std::vector<int> DomainSpec::finite_cusps() const
{
    switch (kind) {
    case DomainKind::F0:
        return {0, 1};
    case DomainKind::F:
        return {};
    case DomainKind::F2:
        return {0, 1, 2};
    }
    return {};
}

ModularMatrix cusp_matrix(int x)
{
    return {0, -1, 1, -x};
}

double cusp_height(const TorsionPair &q, double T_default)
{
    const auto a = cusp_asymptotic(q);
    if (a.q_order > 0) {
        return T_default;
    }
    const double s = frac01(q.s().real());
    const double m = std::min(s, 1 - s);
    // Exponential corrections are at most ~1e3 * exp(-2 pi m T); ask for e^-8 of
    // the leading constant on top of that.
    const double C = 1e3;
    const double L = std::abs(a.leading);
    const double T = (std::log(std::max(C / L, 1.0)) + 8.0) / (2 * pi * m);
    return std::min(std::max(T_default, T), 1e6);
}

std::string to_string(TrianglePosition t)
{
    switch (t) {
    case TrianglePosition::Delta0:
        return "Delta0";
    case TrianglePosition::Delta1:
        return "Delta1";
    case TrianglePosition::Delta2:
        return "Delta2";
    case TrianglePosition::Delta3:
        return "Delta3";
    case TrianglePosition::Boundary:
        return "boundary";
    case TrianglePosition::Outside:
        return "outside";
    }
    return "?";
}

TrianglePosition classify_triangle(const TorsionPair &p)
{
    require_real(p);
    // Signs of r, s, r - 1/2, s - 1/2, r + s - 1/2, r + s - 1, r - 1, each in {-1, 0, 1}.
    int sr, ss, sr2, ss2, sa, sb, sr1;
    if (const auto &e = p.exact()) {
        auto sg = [](std::int64_t v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
        const std::int64_t N = e->N, k1 = e->k1, k2 = e->k2;
        sr = sg(k1);
        ss = sg(k2);
        sr2 = sg(2 * k1 - N);
        ss2 = sg(2 * k2 - N);
        sa = sg(2 * (k1 + k2) - N);
        sb = sg(k1 + k2 - N);
        sr1 = sg(k1 - N);
    } else {
        const double r = p.r().real(), s = p.s().real();
        auto sg = [](double v) { return v > 1e-12 ? 1 : (v < -1e-12 ? -1 : 0); };
        sr = sg(r);
        ss = sg(s);
        sr2 = sg(r - 0.5);
        ss2 = sg(s - 0.5);
        sa = sg(r + s - 0.5);
        sb = sg(r + s - 1);
        sr1 = sg(r - 1);
    }
    if (sr < 0 || ss < 0 || ss2 > 0 || sr1 > 0) {
        return TrianglePosition::Outside;
    }
    if (sr == 0 || ss == 0 || ss2 == 0 || sr2 == 0 || sr1 == 0) {
        return TrianglePosition::Boundary;
    }
    if (sr2 < 0) {
        if (sa == 0) {
            return TrianglePosition::Boundary;
        }
        return sa > 0 ? TrianglePosition::Delta0 : TrianglePosition::Delta3;
    }
    if (sb == 0) {
        return TrianglePosition::Boundary;
    }
    return sb > 0 ? TrianglePosition::Delta1 : TrianglePosition::Delta2;
}

TorsionPair reduce_to_triangle_window(const TorsionPair &p)
{
    require_real(p);
    if (const auto &e = p.exact()) {
        const auto q = RationalPair::normalized(e->k1, e->k2, e->N);
        if (2 * q.k2 > q.N) {
            return TorsionPair::rational(-q.k1, -q.k2, q.N);
        }
        return TorsionPair(q);
    }
    double r = frac01(p.r().real()), s = frac01(p.s().real());
    if (s > 0.5) {
        r = frac01(-r);
        s = frac01(-s);
    }
    return TorsionPair(r, s);
}

WindingResult winding_count(const TorsionPair &p, const DomainSpec &d, const ContourOptions &opt)
{
    require_real(p);
    const auto cusps = domain_cusps(p, d);
    PhaseTracker tracker(opt, [&](cplx tau) { return evaluate(p, tau, ModularMatrix(), cusps); });
    double total = 0;
    for (const auto &path : boundary_paths(d, cusps)) {
        total += tracker.track(path);
    }
    WindingResult out;
    out.turns = total / (2 * pi);
    out.winding = int(std::lround(out.turns));
    out.samples = tracker.samples;
    out.min_relative = tracker.min_relative;
    if (std::abs(out.turns - out.winding) > 0.05) {
        throw IncoherentWinding("accumulated phase " + std::to_string(out.turns) + " turns is not near an integer");
    }
    return out;
}

cplx z2_derivative(const TorsionPair &p, cplx tau, double h)
{
    const double step = h * std::min(1.0, tau.imag()) * std::max(1.0, std::abs(tau));
    auto f = [&](cplx t) { return z2(p, ModuliPoint(t)); };
    return (-f(tau + 2.0 * step) + 8.0 * f(tau + step) - 8.0 * f(tau - step) + f(tau - 2.0 * step)) / (12.0 * step);
}

namespace
{

struct NewtonOutcome {
    cplx x;
    int iters = 0;
    bool converged = false;
};

// Newton on sigma -> Z^(2)_{q}(sigma) for the pair q in some frame.
NewtonOutcome newton_in_frame(const TorsionPair &q, cplx x, int max_iter, double target)
{
    NewtonOutcome out{x};
    for (int it = 0; it <= max_iter; ++it) {
        const auto t = premodular_terms(q, ModuliPoint(out.x));
        out.iters = it;
        if (std::abs(t.z2) <= target * t.scale) {
            out.converged = true;
            return out;
        }
        if (it == max_iter) {
            break;
        }
        const cplx dz = z2_derivative(q, out.x);
        if (dz == 0.0 || !std::isfinite(std::abs(dz))) {
            break;
        }
        cplx step = t.z2 / dz;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            break;
        }
        // Keep the iterate in the upper half-plane.
        for (int h = 0; h < 60 && !((out.x - step).imag() > 0); ++h) {
            step *= 0.5;
        }
        if (!((out.x - step).imag() > 0)) {
            break;
        }
        out.x -= step;
    }
    return out;
}

ZeroCertificate certify(const TorsionPair &p, cplx tau0, DomainKind region, int iters)
{
    const auto t = premodular_terms(p, ModuliPoint(tau0));
    const auto num = solution_numerator(p, ModuliPoint(tau0));
    ZeroCertificate c{tau0, std::abs(t.z2), std::abs(z2_derivative(p, tau0)), t.scale, iters, region, p,
                      std::abs(num.value) / num.scale};
    return c;
}

} // namespace

ZeroCertificate newton_refine(const TorsionPair &p, cplx tau_start, DomainKind region, int max_iter)
{
    const auto r = newton_in_frame(p, tau_start, max_iter, 1e-12);
    if (!r.converged) {
        throw NewtonStall("Newton iteration did not reach 1e-12 x scale within " + std::to_string(max_iter) +
                          " steps");
    }
    return certify(p, r.x, region, r.iters);
}

namespace
{

struct Rect {
    double x0, x1, y0, y1;
    bool contains(cplx z) const
    {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
    cplx centre() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

struct Frame {
    ModularMatrix gamma;
    TorsionPair pair;
    Rect rect;
};

class Locator
{
public:
    Locator(const TorsionPair &p, const DomainSpec &d, const LocateOptions &opt)
        : m_p(p), m_d(d), m_opt(opt), m_cusps(domain_cusps(p, d))
    {}

    std::vector<ZeroCertificate> run()
    {
        std::vector<ZeroCertificate> found;
        for (const Frame &f : frames()) {
            search_top(f, found);
        }
        // Overlapping frames report some zeros twice; keep zeros of the domain once.
        std::vector<ZeroCertificate> out;
        for (const auto &c : found) {
            if (!m_d.contains(c.tau0, 1e-12)) {
                continue;
            }
            const bool dup = std::any_of(out.begin(), out.end(), [&](const ZeroCertificate &o) {
                return std::abs(o.tau0 - c.tau0) <= 1e-8 * std::max(1.0, std::abs(c.tau0));
            });
            if (!dup) {
                out.push_back(c);
            }
        }
        std::sort(out.begin(), out.end(), [](const ZeroCertificate &a, const ZeroCertificate &b) {
            return std::make_pair(a.tau0.real(), a.tau0.imag()) < std::make_pair(b.tau0.real(), b.tau0.imag());
        });
        return out;
    }

    double height(bool inf, int x) const
    {
        for (const auto &c : m_cusps) {
            if (c.at_infinity == inf && (inf || c.x == x)) {
                return c.height;
            }
        }
        throw InternalError("missing cusp");
    }

private:
    std::vector<Frame> frames() const
    {
        const double T = height(true, 0);
        std::vector<Frame> out;
        auto cusp_frame = [&](int x, double u0, double u1) {
            const ModularMatrix g = cusp_matrix(x);
            out.push_back({g, m_p.transformed(g), {u0, u1, 1.0, height(false, x)}});
        };
        switch (m_d.kind) {
        case DomainKind::F0:
            out.push_back({ModularMatrix(), m_p, {0, 1, 0.5, T}});
            cusp_frame(0, -1, 0);
            cusp_frame(1, 0, 1);
            break;
        case DomainKind::F:
            out.push_back({ModularMatrix(), m_p, {0, 1, 0.8, T}});
            break;
        case DomainKind::F2:
            out.push_back({ModularMatrix(), m_p, {0, 2, 0.5, T}});
            cusp_frame(0, -1, 0);
            cusp_frame(1, -1, 1);
            cusp_frame(2, 0, 1);
            break;
        }
        return out;
    }

    Evaluation eval(const Frame &f, cplx sigma) const
    {
        return evaluate(f.pair, sigma, f.gamma, m_cusps);
    }

    int rect_winding(const Frame &f, const Rect &r) const
    {
        PhaseTracker tr(m_opt.contour, [&](cplx s) { return eval(f, s); });
        double total = 0;
        total += tr.track(horizontal(r.y0, r.x0, r.x1));
        total += tr.track([&](double t) { return cplx(r.x1, r.y0 + t * (r.y1 - r.y0)); });
        total += tr.track(horizontal(r.y1, r.x1, r.x0));
        total += tr.track([&](double t) { return cplx(r.x0, r.y1 + t * (r.y0 - r.y1)); });
        const double turns = total / (2 * pi);
        const int k = int(std::lround(turns));
        if (std::abs(turns - k) > 0.05) {
            throw IncoherentWinding("cell winding " + std::to_string(turns) + " is not near an integer");
        }
        return k;
    }

    void search_top(const Frame &f, std::vector<ZeroCertificate> &found) const
    {
        // The lower edge of each frame rectangle is the only edge that is not part of
        // the domain boundary; lower it slightly if it passes too close to a zero.
        for (int attempt = 0; attempt < 8; ++attempt) {
            Rect r = f.rect;
            r.y0 -= 0.013 * attempt;
            try {
                const int k = rect_winding(f, r);
                search(f, r, k, 0, found);
                return;
            } catch (const BoundaryTooClose &) {
                if (attempt == 7) {
                    throw;
                }
            }
        }
    }

    void search(const Frame &f, const Rect &r, int k, int depth, std::vector<ZeroCertificate> &found) const
    {
        if (k == 0) {
            return;
        }
        if (k < 0) {
            throw InternalError("negative winding for a holomorphic function");
        }
        if (k == 1) {
            const auto nr = newton_in_frame(f.pair, r.centre(), 50, 1e-13);
            if (nr.converged && r.contains(nr.x)) {
                found.push_back(to_certificate(f, nr.x, nr.iters));
                return;
            }
        }
        if (depth >= m_opt.max_depth || (r.x1 - r.x0) < m_opt.min_cell) {
            throw NewtonStall("cell subdivision did not isolate a convergent zero");
        }
        static const double offsets[] = {0.5, 0.4871, 0.5137, 0.4613, 0.5419, 0.4337};
        for (double fx : offsets) {
            for (double fy : offsets) {
                const double xm = r.x0 + fx * (r.x1 - r.x0);
                // Tall cells are split geometrically in height.
                const double ym = r.y1 / r.y0 > 4 ? std::exp(std::log(r.y0) + fy * std::log(r.y1 / r.y0))
                                                  : r.y0 + fy * (r.y1 - r.y0);
                const Rect kids[4] = {{r.x0, xm, r.y0, ym}, {xm, r.x1, r.y0, ym}, {r.x0, xm, ym, r.y1}, {xm, r.x1, ym, r.y1}};
                int ks[4];
                try {
                    for (int i = 0; i < 4; ++i) {
                        ks[i] = rect_winding(f, kids[i]);
                    }
                } catch (const BoundaryTooClose &) {
                    continue;
                }
                if (ks[0] + ks[1] + ks[2] + ks[3] != k) {
                    throw IncoherentWinding("child cell windings do not add up");
                }
                for (int i = 0; i < 4; ++i) {
                    search(f, kids[i], ks[i], depth + 1, found);
                }
                return;
            }
        }
        throw BoundaryTooClose("every trial split of a cell passes too close to a zero");
    }

    ZeroCertificate to_certificate(const Frame &f, cplx sigma, int iters) const
    {
        cplx tau = f.gamma.inverse().act(sigma);
        // Polish in the original coordinates when that is numerically comfortable.
        int extra = 0;
        if (tau.imag() > 1e-3) {
            const auto nr = newton_in_frame(m_p, tau, 10, 1e-13);
            if (nr.converged && std::abs(nr.x - tau) < 1e-6 * std::max(1.0, std::abs(tau))) {
                tau = nr.x;
                extra = nr.iters;
            }
        }
        return certify(m_p, tau, m_d.kind, iters + extra);
    }

    TorsionPair m_p;
    DomainSpec m_d;
    LocateOptions m_opt;
    std::vector<Cusp> m_cusps;
};

} // namespace

std::vector<ZeroCertificate> locate_zeros(const TorsionPair &p, const DomainSpec &d, const LocateOptions &opt)
{
    require_real(p);
    const auto top = winding_count(p, d, opt.contour);
    Locator loc(p, d, opt);
    auto zeros = loc.run();
    if (int(zeros.size()) != top.winding) {
        throw InternalError("located " + std::to_string(zeros.size()) + " zeros but the boundary winding is " +
                            std::to_string(top.winding) + " for " + p.to_string());
    }
    return zeros;
}

MnZeroCount count_mn_zeros(std::int64_t N, const DomainSpec &d, int threads)
{
    if (N < 3) {
        throw InvalidArgument("M_N needs N >= 3");
    }
    std::vector<RationalPair> reps;
    for (const auto &p : enumerate_qn(N)) {
        if (canonical_sign(p) == p) {
            reps.push_back(p);
        }
    }

    struct Hit {
        RationalPair cls;
        cplx tau;
        TorsionPair pair;
    };
    const bool via_f0 = d.kind == DomainKind::F;
    const DomainSpec search = via_f0 ? DomainSpec::make(DomainKind::F0, d.truncation_height) : d;
    std::vector<std::vector<Hit>> per(reps.size());
    parallel_for(reps.size(), threads, [&](std::size_t i) {
        const TorsionPair p = reduce_to_triangle_window(TorsionPair(reps[i]));
        for (const auto &c : locate_zeros(p, search)) {
            if (via_f0) {
                const auto red = reduce_to_domain_F(c.tau0);
                const TorsionPair q = p.transformed(red.gamma);
                per[i].push_back({canonical_sign(*q.exact()), red.reduced_tau, q});
            } else {
                per[i].push_back({canonical_sign(*p.exact()), c.tau0, p});
            }
        }
    });

    MnZeroCount out;
    out.N = N;
    out.domain = d.kind;
    std::vector<Hit> unique;
    for (const auto &hits : per) {
        for (const auto &h : hits) {
            bool merged = false;
            for (std::size_t j = 0; j < unique.size(); ++j) {
                if (std::abs(unique[j].tau - h.tau) <= 1e-7 * std::max(1.0, std::abs(h.tau))) {
                    if (unique[j].cls == h.cls) {
                        ++out.hits[j];
                        merged = true;
                        break;
                    }
                }
            }
            if (!merged) {
                unique.push_back(h);
                out.hits.push_back(1);
            }
        }
    }
    for (std::size_t i = 0; i < unique.size(); ++i) {
        for (std::size_t j = i + 1; j < unique.size(); ++j) {
            if (unique[i].cls != unique[j].cls && std::abs(unique[i].tau - unique[j].tau) <= 1e-8) {
                out.ambiguities.push_back({unique[i].tau, unique[i].cls, unique[j].cls});
            }
        }
    }
    for (const auto &u : unique) {
        out.certificates.push_back(newton_refine(u.pair, u.tau, d.kind));
    }
    out.interior_count = 2 * std::int64_t(unique.size());
    return out;
}

ValenceReport valence_check(std::int64_t N, int threads)
{
    ValenceReport out;
    out.N = N;
    const auto count = count_mn_zeros(N, DomainSpec::make(DomainKind::F), threads);
    out.interior = count.interior_count;
    out.cusp_formula = euler_phi(N) + euler_phi(N, 2);
    out.qn_over_4 = qn_size(N) / 4;
    out.total = out.interior + out.cusp_formula;
    out.balanced = out.total == out.qn_over_4 && qn_size(N) % 4 == 0;

    // Least-squares slope of log|M_N(iT)| against T.
    const double Ts[3] = {8.0, 10.0, 12.0};
    double ly[3];
    for (int k = 0; k < 3; ++k) {
        ly[k] = m_n(N, ModuliPoint(cplx(0, Ts[k])), threads).log_abs;
    }
    const double tm = (Ts[0] + Ts[1] + Ts[2]) / 3, ym = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0, sxx = 0;
    for (int k = 0; k < 3; ++k) {
        sxy += (Ts[k] - tm) * (ly[k] - ym);
        sxx += (Ts[k] - tm) * (Ts[k] - tm);
    }
    out.cusp_numeric = -(sxy / sxx) / (2 * pi);
    out.cusp_agrees = std::abs(out.cusp_numeric - double(out.cusp_formula)) <= 0.1;
    out.log_abs_at_i = m_n(N, ModuliPoint(cplx(0, 1)), threads).log_abs;
    out.log_abs_at_rho = m_n(N, ModuliPoint(std::exp(cplx(0, pi / 3))), threads).log_abs;
    return out;
}

} // namespace pvi
