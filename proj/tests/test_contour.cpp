#include "xxz/contour.hpp"
#include "xxz/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace xxz;

TEST(Contour, Phi11)
{
    EXPECT_NEAR(std::abs(phi11(0.0, 0.7)), 0.0, 1e-15);
    const cplx x(0.5, 0.2);
    EXPECT_NEAR(std::abs(phi11(x + cplx(0, pi), 0.4) - phi11(x, 0.4)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(phi11(cplx(0, 0.35), 0.7) + 1.0), 0.0, 1e-14);
}

TEST(Contour, TestFunctionFamilies)
{
    for (const TestFunctionJ& J : {cosh_family(2, {2.0, 1.5}), cosh_family_mixed(2, {2.0, 1.5}, {-2.0, 1.2}),
                                   cosh_family(3, {3.0, 1.0})}) {
        const TestFunctionCheck c = check_test_function(J);
        EXPECT_TRUE(c.ok) << J.name;
        EXPECT_LT(c.symmetry, 1e-14);
        EXPECT_LT(c.periodicity, 1e-12);
    }
    const cplx nu[2] = {0.3, -0.2};
    EXPECT_EQ(zero_function(2).tilde(nu), cplx(0.0));
}

TEST(Contour, NumericalResidue)
{
    const cplx c(0.3, 0.1);
    const cplx r = numerical_residue([&](cplx z) { return std::exp(z) / (z - c); }, c);
    EXPECT_NEAR(std::abs(r - std::exp(c)), 0.0, 1e-12);
}

TEST(Contour, ResidueReductions)
{
    const double zeta = 0.4 * pi;
    const TestFunctionJ J2 = cosh_family(2, {2.0, 1.5});
    const TestFunctionJ J3 = cosh_family(3, {3.0, 1.0});
    EXPECT_LT(reduce_residue(J2, {0, 1}, zeta).residue_check, 1e-8);
    EXPECT_LT(reduce_residue(J3, {1, 1, 0}, zeta).residue_check, 1e-8);
    EXPECT_LT(reduce_residue(J3, {0, 0, 1}, zeta).residue_check, 1e-8);

    // J_{0,1}(nu - i zeta/2) = sin^2 zeta / sin 2 zeta * J~(nu, nu - i zeta)
    const ReducedJ r = reduce_residue(J2, {0, 1}, zeta);
    const cplx nu(0.3, 0.05);
    const cplx arg[1] = {nu - cplx(0, zeta / 2)};
    const cplx pair[2] = {nu, nu - cplx(0, zeta)};
    const double f = std::pow(std::sin(zeta), 2) / std::sin(2 * zeta);
    EXPECT_NEAR(std::abs(r.eval(arg) - f * J2.tilde(pair)), 0.0, 1e-12 * std::abs(J2.tilde(pair)));
}

TEST(Contour, TauRegimes)
{
    EXPECT_EQ(tau(1.5, 1.0, 'L'), tau(1.5, 1.0, 'R'));
    EXPECT_NE(tau(0.5, 1.0, 'L'), tau(0.5, 1.0, 'R'));
}

TEST(Contour, GammaDecomposition)
{
    // C1 = C1A + GammaA for a function analytic off its poles
    ContourParams p;
    p.zeta = 0.35 * pi;
    const cplx w(2.0, 1.5);
    auto f = [&](cplx z) { return f_w(z, w) * std::exp(-0.1 * z * z); };
    TestFunctionJ J = cosh_family(1, w);
    const auto poles = J.factor_poles();
    std::vector<cplx> sens;
    for (cplx pl : poles)
        for (int k = -2; k <= 2; ++k) sens.push_back(pl + cplx(0, k * pi));
    const cplx full = integrate_contour(f, make_contour("C1", p), p, sens);
    const cplx split = integrate_contour(f, make_contour("C1A", p), p, sens) +
                       integrate_contour(f, make_contour("GammaA", p), p, sens);
    EXPECT_NEAR(std::abs(full - split), 0.0, 1e-9 * std::abs(full));
}

TEST(Contour, IdentityN2Single)
{
    ContourParams p;
    p.zeta = 0.35 * pi;
    p.v = 1.5;
    const IdentityResult r = eval_identity_n2(cosh_family(2, {2.0, 1.5}), p);
    EXPECT_LT(r.rel_diff, 1e-6);
    EXPECT_LT(r.tail_bound, 1e-6);
    EXPECT_GT(r.pole_margin, 0.05);
}

TEST(Contour, ZeroFunction)
{
    ContourParams p;
    const IdentityResult r = eval_identity_n2(zero_function(2), p);
    EXPECT_EQ(r.lhs, cplx(0.0));
    EXPECT_EQ(r.rhs, cplx(0.0));
    p.order = 4;
    p.A = 3.0;
    p.min_length = 1e-5;
    const IdentityResult r3 = eval_identity_n3(zero_function(3), p);
    EXPECT_EQ(r3.lhs, cplx(0.0));
    EXPECT_EQ(r3.rhs, cplx(0.0));
}

TEST(Contour, RejectsDegenerateZeta)
{
    ContourParams p;
    p.zeta = 0.5 * pi;
    EXPECT_THROW(eval_identity_n2(cosh_family(2, {2.0, 1.5}), p), Error);
}

TEST(MultipleIntegrals, GaudinMehtaAndLaguerre)
{
    const auto rows = verify_multiple_integrals(4);
    for (const auto& r : rows) {
        if (r.kind == "gaudin-mehta") {
            EXPECT_LT(r.rel_diff, 1e-8) << r.n;
            EXPECT_TRUE(r.closed_form_holds);
        } else {
            EXPECT_NEAR(r.quadrature, r.reference, 1e-8 * r.reference) << r.n;
            EXPECT_NEAR(r.reference, barnes_g(r.n + 1) * barnes_g(r.n + 2), 0.0);
        }
    }
    EXPECT_NEAR(rows[0].quadrature, std::sqrt(pi), 1e-12);
}
