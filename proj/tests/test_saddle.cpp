#include "xxz/dressed.hpp"
#include "xxz/errors.hpp"
#include "xxz/saddle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace xxz;

namespace {

DressedSet solve_q(double zeta, double q)
{
    ModelParams p;
    p.zeta = zeta;
    p.q = q;
    return find_fermi_endpoint(p);
}

DressedSet free_fermion()
{
    ModelParams p;
    p.zeta = pi / 2;
    p.h = 2.0;
    return find_fermi_endpoint(p);
}

} // namespace

TEST(Saddle, LargeVelocityLimit)
{
    const DressedSet ds = solve_q(0.5365 * pi, 0.2);
    for (double x : {0.3, 1.2})
        EXPECT_NEAR(std::abs(u_r(x, 1e12, 0, ds) - ds.p_r(1, x)), 0.0, 1e-10 * std::abs(ds.p_r(1, x)));
    EXPECT_NEAR(u_r(ds.q(), 2.0, 0, ds).imag(), 0.0, 1e-14);
}

TEST(Saddle, FreeFermionDerivative)
{
    const DressedSet ds = free_fermion();
    const double v = 3.0;
    for (double x : {-0.8, 0.1, 1.5}) {
        const double c = std::cosh(2 * x);
        EXPECT_NEAR(u_r(x, v, 0, ds, 1).real(), 2.0 / c - (8.0 / v) * std::sinh(2 * x) / (c * c), 1e-10);
    }
}

TEST(Saddle, FreeFermionVelocities)
{
    const DressedSet ds = free_fermion();
    EXPECT_NEAR(v_infinity(ds), 4.0, 1e-12);
    EXPECT_NEAR(fermi_velocity(ds), 4.0 * std::tanh(2 * ds.q()), 1e-10);
    for (double v : {1.0, 2.0, 3.0}) {
        const auto s = find_saddles(0, v, ds);
        ASSERT_EQ(s.size(), 1u) << v;
        EXPECT_NEAR(s[0].omega.real(), 0.5 * std::atanh(v / 4.0), 1e-9);
        EXPECT_LT(std::abs(u_r(s[0].omega, v, 0, ds, 1)), 1e-9);
    }
    // |v| < v_F: the real-line saddle lies inside the Fermi zone
    EXPECT_LT(std::abs(find_saddles(0, 2.0, ds)[0].omega.real()), ds.q());
}

TEST(Saddle, VelocityOrdering)
{
    const DressedSet small = solve_q(0.5365 * pi, 0.05);
    EXPECT_LT(fermi_velocity(small), v_infinity(small));
    const DressedSet tiny = solve_q(0.5365 * pi, 1e-3);
    EXPECT_LT(fermi_velocity(tiny), 0.05 * v_infinity(tiny));
    EXPECT_GT(fermi_velocity(solve_q(0.9065 * pi, 0.8)), 0.0);
}

TEST(Saddle, VInfTwoRoutes)
{
    for (double z : {0.5365, 0.9065, 0.1065}) {
        const DressedSet ds = solve_q(z * pi, z > 0.9 ? 0.8 : 0.2);
        EXPECT_NEAR(v_infinity_limit_route(ds), v_infinity(ds), 1e-6 * v_infinity(ds)) << z;
    }
}

TEST(Saddle, ParityAndResidual)
{
    for (double z : {0.5365, 0.9065, 0.1065}) {
        const DressedSet ds = solve_q(z * pi, z > 0.9 ? 0.8 : 0.2);
        const double vinf = v_infinity(ds);
        for (int sp : species_list(ds, 8)) {
            const SaddleCounter counter(sp, ds);
            for (double f : {0.5, 1.5}) {
                const int n = counter.count(f * vinf);
                EXPECT_EQ(n % 2, f < 1.0 ? 1 : 0) << "zeta=" << z << " species=" << sp;
                for (const SaddlePoint& s : find_saddles(counter, sp, f * vinf, ds)) {
                    const double scale = std::max(1.0, std::abs(s.u_second));
                    EXPECT_LT(std::abs(u_r(s.omega, f * vinf, sp, ds, 1)) / scale, 1e-9);
                }
            }
        }
    }
}

TEST(Saddle, SpaceLikePlacement)
{
    const DressedSet ds = solve_q(0.5365 * pi, 0.2);
    const double v = 0.5 * (fermi_velocity(ds) + v_infinity(ds));
    const auto s = find_saddles(0, v, ds);
    ASSERT_FALSE(s.empty());
    for (const SaddlePoint& p : s) EXPECT_GT(std::abs(p.omega.real()), ds.q());
    const auto t = find_saddles(0, 0.5 * fermi_velocity(ds), ds);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_LT(std::abs(t[0].omega.real()), ds.q());
}

TEST(Saddle, FigureStructures)
{
    const DressedSet a = solve_q(0.5365 * pi, 0.2);
    const StructureReport ra = classify_structure(0.5 * v_infinity(a), a);
    const SpeciesStructure* s0 = ra.find(0);
    ASSERT_NE(s0, nullptr);
    EXPECT_NEAR(s0->v_max, ra.v_inf, 2e-3 * ra.v_inf);

    const DressedSet b = solve_q(0.9065 * pi, 0.8);
    const StructureReport rb = classify_structure(0.5 * v_infinity(b), b);
    const SpeciesStructure* s1 = rb.find(1);
    ASSERT_NE(s1, nullptr);
    EXPECT_GT(s1->v_max, rb.v_inf);
    const double v_between = 0.5 * (rb.v_inf + s1->v_max);
    EXPECT_EQ(SaddleCounter(1, b).count(v_between), 2);

    const DressedSet c = solve_q(0.1065 * pi, 0.2);
    const StructureReport rc = classify_structure(0.5 * v_infinity(c), c);
    EXPECT_FALSE(rc.minimal);
    ASSERT_NE(rc.find(0), nullptr);
    EXPECT_GT(rc.find(0)->v_max, rc.v_inf);
}

TEST(Saddle, NearCriticalGuard)
{
    const DressedSet ds = solve_q(0.5365 * pi, 0.2);
    try {
        classify_structure(fermi_velocity(ds), ds);
        FAIL() << "expected near-critical";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::near_critical);
    }
}

TEST(Saddle, SignTableAtInfinity)
{
    const DressedSet ds = solve_q(0.5365 * pi, 0.2);
    const double vinf = v_infinity(ds);
    const int first = sgn_sin(2, ds.zeta()) * (std::sin(0.6) > 0 ? 1 : -1);
    for (int side : {1, -1}) {
        EXPECT_EQ(sign_im_u_table(2, 1.5 * vinf, 0.3, side, ds.zeta(), vinf), first);
        EXPECT_EQ(sign_im_u_at_infinity(2, 1.5 * vinf, 0.3, side, ds), first);
    }
    EXPECT_EQ(sign_im_u_table(2, 0.5 * vinf, 0.3, 1, ds.zeta(), vinf), -first);
    EXPECT_EQ(sign_im_u_at_infinity(2, 0.5 * vinf, 0.3, 1, ds), -first);
    EXPECT_NEAR(u_r(0.7, 0.5 * vinf, 0, ds).imag(), 0.0, 1e-14);
}
