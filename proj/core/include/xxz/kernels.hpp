#pragma once

#include "xxz/quadrature.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace xxz {

struct KernelParams {
    double zeta = 0.0;
    double eta = 0.0;
    bool near_rational = false;
    int num = 0;  // zeta/pi ~ num/den when near_rational
    int den = 1;
};

// Flags zeta/pi within 1e-9 of p/q with q <= 16.
std::optional<std::pair<int, int>> near_rational(double zeta, double tol = 1e-9, int max_den = 16);
KernelParams make_kernel_params(double zeta, double eta);

// K(lambda|eta) = sin(2 eta) / (2 pi sinh(lambda + i eta) sinh(lambda - i eta)) and its
// first two lambda-derivatives.
cplx kernel_k(cplx lambda, double eta, int deriv = 0);
// K_r = K(.|(r+1) zeta/2) + K(.|(r-1) zeta/2)
cplx kernel_kr(cplx lambda, int r, double zeta, int deriv = 0);

// theta_1(lambda|eta) = 2 pi * int K(mu|eta) dmu along [0, i Im lambda] u [i Im lambda, lambda],
// poles on the imaginary axis passed on their left.
cplx bare_phase_1(cplx lambda, double eta);
cplx bare_phase(cplx lambda, int r, double zeta);

// Closed forms of the same path integrals for lambda = x (sigma = 0) and
// lambda = x +- i pi/2 (sigma = 1).
double bare_phase_1_line(double x, int sigma, double eta);
double bare_phase_line(double x, int sigma, int r, double zeta);

// Path integral evaluated numerically even on the two lines above.
cplx bare_phase_1_path(cplx lambda, double eta);

// w - pi * floor(w / pi)
double hat(double w);

struct StringCombinatorics {
    int r = 1;
    int ell_r = 0;
    int m_r = 0;
    int kappa_r = 0;
    std::vector<int> s_k;  // s_k[k-1] = sgn sin(k zeta), k = 1..r

    int s(int k) const { return s_k.at(k - 1); }
};

StringCombinatorics string_combinatorics(int r, double zeta);

int sgn_sin(int k, double zeta);

} // namespace xxz
