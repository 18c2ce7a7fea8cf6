#include "xxz/errors.hpp"
#include "xxz/kernels.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace xxz;

TEST(Kernel, Values)
{
    EXPECT_NEAR(kernel_k(0.0, pi / 4).real(), 1.0 / pi, 1e-15);
    EXPECT_NEAR(std::abs(kernel_k(0.0, pi / 2)), 0.0, 1e-15);
    const cplx l(0.3, 0.1);
    EXPECT_NEAR(std::abs(kernel_k(l + cplx(0, pi), 0.4) - kernel_k(l, 0.4)), 0.0, 1e-14);
}

TEST(Kernel, Derivatives)
{
    const cplx l(0.4, 0.2);
    const double h = 1e-5;
    EXPECT_NEAR(std::abs((kernel_k(l + h, 0.7) - kernel_k(l - h, 0.7)) / (2 * h) - kernel_k(l, 0.7, 1)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs((kernel_k(l + h, 0.7, 1) - kernel_k(l - h, 0.7, 1)) / (2 * h) - kernel_k(l, 0.7, 2)), 0.0,
                1e-7);
}

TEST(Kernel, StringKernels)
{
    const cplx l(0.2, 0.05);
    EXPECT_NEAR(std::abs(kernel_kr(l, 1, 0.37) - kernel_k(l, 0.37)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(kernel_kr(0.0, 2, pi / 2)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(kernel_kr(0.7, 3, 0.3 * pi) - kernel_kr(-0.7, 3, 0.3 * pi)), 0.0, 1e-14);
}

TEST(BarePhase, ClosedForms)
{
    EXPECT_NEAR(std::abs(bare_phase_1(0.0, 0.5)), 0.0, 1e-15);
    EXPECT_NEAR(bare_phase_1(1.0, pi / 3).real(), 2.0 * std::atan(std::tanh(1.0) / std::tan(pi / 3)), 1e-12);
    EXPECT_NEAR(bare_phase_1(20.0, pi / 3).real(), pi / 3, 1e-8);
    // closed form on both lines against direct path quadrature
    for (double x : {-1.3, 0.2, 2.5}) {
        EXPECT_NEAR(bare_phase_1_line(x, 0, 0.6), bare_phase_1_path(x, 0.6).real(), 1e-10);
        EXPECT_NEAR(bare_phase_1_line(x, 1, 0.6), bare_phase_1_path(cplx(x, pi / 2), 0.6).real(), 1e-10);
    }
}

TEST(Combinatorics, Examples)
{
    const StringCombinatorics c1 = string_combinatorics(1, 0.7);
    EXPECT_EQ(c1.ell_r, 0);
    EXPECT_EQ(c1.m_r, 0);
    for (double z : {0.1, 1.3, 2.9}) EXPECT_EQ(string_combinatorics(2, z).ell_r, -1);
    EXPECT_EQ(string_combinatorics(3, 0.3 * pi).kappa_r, 0);
    EXPECT_NEAR(hat(3.5), 3.5 - pi, 1e-15);
    EXPECT_EQ(sgn_sin(2, 0.7 * pi), -1);
}

TEST(Kernel, NearRational)
{
    EXPECT_TRUE(near_rational(pi / 3).has_value());
    EXPECT_FALSE(near_rational(0.5365 * pi).has_value());
}
