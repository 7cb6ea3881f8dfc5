#include <gtest/gtest.h>

#include <random>

#include "pvi/elliptic.hpp"
#include "pvi/errors.hpp"
#include "pvi/premodular.hpp"
#include "pvi_oracle/lattice_sums.hpp"

using namespace pvi;

namespace
{

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::abs(b);
}

ModularMatrix random_sl2(std::mt19937_64 &rng, int bound)
{
    std::uniform_int_distribution<int> e(-bound, bound);
    for (;;) {
        const int a = e(rng), b = e(rng), c = e(rng);
        if (a != 0 && (1 + b * c) % a == 0 && std::abs((1 + b * c) / a) <= bound) {
            return {a, b, c, (1 + b * c) / a};
        }
    }
}

} // namespace

TEST(TorsionPairType, RejectsHalfPeriods)
{
    EXPECT_THROW(TorsionPair(0.5, 0.0), Degenerate);
    EXPECT_THROW(TorsionPair(0.0, 0.0), Degenerate);
    EXPECT_THROW(TorsionPair(1.5, -0.5), Degenerate);
    EXPECT_THROW(TorsionPair::rational(2, 0, 4), Degenerate);
    EXPECT_NO_THROW(TorsionPair(0.3, 0.5));
    EXPECT_NO_THROW(TorsionPair::rational(1, 0, 4));
}

TEST(TorsionPairType, ExactTransform)
{
    const auto p = TorsionPair::rational(1, 2, 5);
    const ModularMatrix g(2, 1, 1, 1);
    const auto q = p.transformed(g);
    ASSERT_TRUE(q.exact());
    // (s', r') = (2, 1) . [[1, -1], [-1, 2]] = (1, 0) mod 5.
    EXPECT_EQ(q.exact()->k2, 1);
    EXPECT_EQ(q.exact()->k1, 0);
}

TEST(Hecke, Reflection)
{
    const ModuliPoint m(cplx(0, 1.1));
    const TorsionPair p(0.3, 0.2);
    EXPECT_LE(rel(hecke_Z(p.reflected(), m), -hecke_Z(p, m)), 1e-13);
}

TEST(Hecke, WeightOneTranslation)
{
    const ModularMatrix g(1, 1, 0, 1);
    const cplx tau(0.2, 1.4);
    const TorsionPair p(0.3, 0.2);
    const cplx lhs = hecke_Z(p.transformed(g), ModuliPoint(g.act(tau)));
    const cplx rhs = g.factor(tau) * hecke_Z_direct(p, ModuliPoint(tau));
    EXPECT_LE(rel(lhs, rhs), 1e-12);
}

TEST(Hecke, CuspLimitAgainstOracle)
{
    const cplx tau(0, 20);
    const TorsionPair p(0.25, 0.0);
    const cplx z = hecke_Z(p, ModuliPoint(tau));
    EXPECT_NEAR(std::abs(z - pi), 0.0, 1e-12);
    const pvi_oracle::LatticeSums oracle(tau);
    EXPECT_LE(std::abs(z - oracle.hecke(0.25, 0.0)), 1e-6);
}

TEST(Hecke, DirectAgreesWithReducedFrame)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2), v(0.2, 2.5), w(0, 1);
    for (int i = 0; i < 100; ++i) {
        const cplx tau(u(rng), v(rng));
        const TorsionPair p(w(rng), w(rng));
        const ModuliPoint m(tau);
        EXPECT_LE(rel(hecke_Z(p, m), hecke_Z_direct(p, m)), 1e-10) << tau;
    }
}

TEST(Hecke, NearLattice)
{
    const ModuliPoint m(cplx(0, 1.2));
    const cplx s0(0.3);
    // r + s tau = 1 exactly.
    const TorsionPair p(1.0 - s0 * m.tau(), s0);
    EXPECT_THROW(hecke_Z(p, m), NearLattice);
    EXPECT_THROW(hecke_Z_direct(p, m), NearLattice);
}

TEST(Z2, Degenerate)
{
    EXPECT_THROW(z2(TorsionPair(0.5, 0.0), ModuliPoint(cplx(0, 1))), Degenerate);
}

TEST(Z2, CuspValue)
{
    const cplx v = z2(TorsionPair(0.1, 0.25), ModuliPoint(cplx(0, 20)));
    EXPECT_LE(std::abs(v - cplx(0, -0.375 * pi * pi * pi)), 5e-2);
}

TEST(Z2, WeightThreeInversion)
{
    const ModularMatrix g(0, -1, 1, 0);
    const cplx tau(0.3, 1.2);
    const TorsionPair p(0.17, 0.36);
    const cplx f = g.factor(tau);
    const cplx lhs = z2(p.transformed(g), ModuliPoint(g.act(tau)));
    const cplx rhs = f * f * f * z2_direct(p, ModuliPoint(tau));
    EXPECT_LE(rel(lhs, rhs), 1e-9);
}

TEST(Z2, SignSymmetryRandom)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1), v(0.3, 3), w(0, 1);
    for (int i = 0; i < 50; ++i) {
        const TorsionPair p(w(rng), w(rng));
        const ModuliPoint m(cplx(u(rng), v(rng)));
        EXPECT_LE(rel(z2(p.reflected(), m), -z2(p, m)), 1e-11);
    }
}

TEST(Z2, WeightThreeRandom)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.7, 1.6), w(0, 1);
    for (int i = 0; i < 20; ++i) {
        const ModularMatrix g = random_sl2(rng, 10);
        const cplx tau(u(rng), v(rng));
        const TorsionPair p(w(rng), w(rng));
        const cplx f = g.factor(tau);
        const cplx lhs = z2(p.transformed(g), ModuliPoint(g.act(tau)));
        const cplx rhs = f * f * f * z2_direct(p, ModuliPoint(tau));
        EXPECT_LE(rel(lhs, rhs), 1e-9) << g << " tau=" << tau;
        const cplx zl = hecke_Z(p.transformed(g), ModuliPoint(g.act(tau)));
        EXPECT_LE(rel(zl, f * hecke_Z_direct(p, ModuliPoint(tau))), 1e-9);
    }
}

TEST(Z2, CuspConvergenceMonotone)
{
    for (double s : {0.1, 0.2, 0.3, 0.45}) {
        const TorsionPair p(0.37, s);
        const cplx lead = cusp_asymptotic(p).leading;
        double prev = 1e300;
        for (double T : {10.0, 15.0, 20.0}) {
            const double d = std::abs(z2(p, ModuliPoint(cplx(0, T))) - lead);
            EXPECT_LT(d, prev) << "s=" << s << " T=" << T;
            prev = d;
        }
    }
}

TEST(CuspAsymptotic, Cases)
{
    const auto a = cusp_asymptotic(TorsionPair(0.9, 0.25));
    EXPECT_NEAR(std::abs(a.leading - cplx(0, -0.375 * pi * pi * pi)), 0.0, 1e-12);
    EXPECT_EQ(a.q_order, 0.0);
    const auto b = cusp_asymptotic(TorsionPair(0.25, 0.0));
    EXPECT_NEAR(std::abs(b.leading - cplx(-48 * pi * pi * pi)), 0.0, 1e-10);
    EXPECT_EQ(b.q_order, 1.0);
    const auto c = cusp_asymptotic(TorsionPair::rational(1, 2, 4));
    EXPECT_EQ(c.q_order, 0.5);
    EXPECT_NEAR(std::abs(c.leading - cplx(-12 * pi * pi * pi)), 0.0, 1e-10);
    EXPECT_THROW(cusp_asymptotic(TorsionPair(0.5, 0.5)), Degenerate);
}

TEST(Z2, CuspQCoefficient)
{
    const cplx tau(0, 4);
    const cplx q = nome(tau);
    for (double r : {0.1, 0.3, 0.7}) {
        const TorsionPair p0(r, 0.0);
        const auto a0 = cusp_asymptotic(p0);
        EXPECT_LE(rel(z2(p0, ModuliPoint(tau)) / q, a0.leading), 1e-3);
        const TorsionPair ph(r, 0.5);
        const auto ah = cusp_asymptotic(ph);
        EXPECT_LE(rel(z2(ph, ModuliPoint(tau)) / std::sqrt(q), ah.leading), 1e-3);
    }
}

TEST(Resultant, Identity)
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1), v(0.5, 2);
    for (int i = 0; i < 50; ++i) {
        const auto lat = invariants_g(ModuliPoint(cplx(u(rng), v(rng))));
        const cplx g2 = lat.g2, g3 = lat.g3;
        const cplx x(3 * u(rng), 3 * u(rng));
        const cplx f = 4.0 * x * x * x - g2 * x - g3;
        const cplx a = 2.0 * g2 * x + 3.0 * g3;
        const cplx b = 12.0 * g2 * x * x + 36.0 * g3 * x + g2 * g2;
        const cplx lhs = 9.0 * f * a * a + x * b * b - (12.0 * x * x - g2) * a * b;
        // The elimination gives -3 (g2^3 - 27 g3^2)(4x^3 - g2 x - g3); only its vanishing matters.
        const cplx rhs = -3.0 * (g2 * g2 * g2 - 27.0 * g3 * g3) * f;
        const double scale = std::abs(9.0 * f * a * a) + std::abs(x * b * b) + std::abs((12.0 * x * x - g2) * a * b);
        EXPECT_LE(std::abs(lhs - rhs), 1e-8 * scale);
    }
}

TEST(MN, NonZeroAtEllipticPoints)
{
    const cplx rho = std::exp(cplx(0, pi / 3));
    EXPECT_GT(m_n(3, ModuliPoint(rho)).log_abs, -50.0);
    EXPECT_GT(m_n(3, ModuliPoint(cplx(0, 1))).log_abs, -50.0);
}

TEST(MN, TranslationInvariant)
{
    const cplx tau(0.1, 1.3);
    const auto a = m_n(4, ModuliPoint(tau));
    const auto b = m_n(4, ModuliPoint(tau + 1.0));
    ASSERT_TRUE(a.value && b.value);
    EXPECT_LE(rel(*b.value, *a.value), 1e-9);
}

TEST(MN, ThreadCountDoesNotChangeBits)
{
    const ModuliPoint m(cplx(0.23, 0.91));
    const auto a = m_n(7, m, 1);
    const auto b = m_n(7, m, 4);
    EXPECT_EQ(a.log_abs, b.log_abs);
    EXPECT_EQ(a.arg, b.arg);
}

TEST(Numerator, AwayFromZero)
{
    const auto n = solution_numerator(TorsionPair(0.3, 0.3), ModuliPoint(cplx(0.4, 1.1)));
    EXPECT_GT(std::abs(n.value), 1e-6 * n.scale);
}

TEST(Z2, HalfCuspHighUp)
{
    // At s = 1/2 the O(1) parts cancel; the q^(1/2) term must survive at Im tau = 20.
    for (double r : {0.1, 0.3, 0.77}) {
        const TorsionPair p(r, 0.5);
        const cplx tau(0, 20);
        const cplx lead = cusp_asymptotic(p).leading * std::sqrt(nome(tau));
        EXPECT_LE(std::abs(z2(p, ModuliPoint(tau)) / lead - 1.0), 1e-6) << r;
    }
}
