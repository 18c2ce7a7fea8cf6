#pragma once

#include "xxz/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace xxz {

// Model test functions: J~(nu_1..nu_n) = sum_t c_t prod_a f_{w_{t,a}}(nu_a)
// with f_w(nu) = 1 / (cosh 2nu - w). Term lists are closed under permutation
// of the positions so that J~ is symmetric.
struct TestFunctionJ {
    struct Term {
        cplx coeff{1.0, 0.0};
        std::vector<cplx> w;  // one shape parameter per argument
    };
    int n = 2;
    std::string name;
    std::vector<Term> terms;

    cplx tilde(std::span<const cplx> nu) const;
    // Poles of the single-variable factors, reduced to Im in (-pi/2, pi/2].
    std::vector<cplx> factor_poles() const;
};

cplx f_w(cplx nu, cplx w);
TestFunctionJ cosh_family(int n, cplx w);
TestFunctionJ cosh_family_mixed(int n, cplx wa, cplx wb);
TestFunctionJ zero_function(int n);

struct TestFunctionCheck {
    double symmetry = 0.0;     // max relative defect under permutations
    double periodicity = 0.0;  // max relative defect under nu_a -> nu_a + i pi
    double decay = 0.0;        // max |J~| e^{2 sum |Re nu|} at |Re nu_a| = 10
    bool ok = false;
};
TestFunctionCheck check_test_function(const TestFunctionJ& J, std::uint64_t seed = 7);

cplx phi11(cplx x, double zeta);

// J_{n,0}: the test function times prod_{a != b} sinh(nu_ab) / sinh(nu_ab - i zeta).
cplx assembled_J(const TestFunctionJ& J, std::span<const cplx> nu, double zeta);

// (1 / 2 pi i) times the contour integral of f on a circle around `center`.
cplx numerical_residue(const std::function<cplx(cplx)>& f, cplx center, double radius = 1e-3, int points = 64);

struct ReducedJ {
    std::vector<int> target;  // {0,1}, {1,1,0} or {0,0,1}
    int arity = 1;
    std::function<cplx(std::span<const cplx>)> eval;
    double residue_check = 0.0;  // max relative deviation from numerical residues
};

// Closed-form residue reductions of J_{2,0} / J_{3,0,0}, each verified against
// small-circle numerical residues at 10 random base points.
ReducedJ reduce_residue(const TestFunctionJ& J, const std::vector<int>& target, double zeta,
                        double tol = 1e-8, std::uint64_t seed = 11);

struct ContourParams {
    double zeta = 0.35 * pi;
    double v = 1.5;       // velocity in the same units as v_inf
    double v_inf = 1.0;
    double A = 2.0;
    double q = 0.5;       // Fermi endpoint of the hole gap in C_1
    double delta = 0.05;  // size of the pieces joining +-q to the real axis
    double L = 12.0;      // truncation |Re| <= L of unbounded contours
    double separation = 0.25;  // offset between encased contours
    int order = 16;            // Gauss-Legendre nodes per piece
    double h_max = 1.0;        // longest piece before grading
    double min_length = 1e-9;  // grading floor
    // Combine separations s and s/2 linearly to remove the O(s) dependence of
    // the triple encased integral (n = 3 only; the n = 2 value does not
    // depend on the separation).
    bool richardson = false;
};

// tau_{v;alpha}: +1 when Im u_1 > 0 on the strip above the real axis on side
// alpha ('L' or 'R'), -1 when it is the strip below.
int tau(double v, double v_inf, char side);

struct ContourSpec {
    std::string id;
    std::vector<std::pair<double, Polyline>> pieces;  // formal sum
};

// Contour ids: C1, C2, C3, C1A, C2A, C3A, C3A_mod, GammaA, J_Av. `A_shift`
// moves the vertical sides of compact contours to +-(A + A_shift).
ContourSpec make_contour(const std::string& id, const ContourParams& p, double A_shift = 0.0);

cplx integrate_contour(const std::function<cplx(cplx)>& f, const ContourSpec& c, const ContourParams& p,
                       std::span<const cplx> sensitive = {});

struct IdentityResult {
    double lhs_re = 0.0, lhs_im = 0.0;
    double rhs_re = 0.0, rhs_im = 0.0;
    cplx lhs, rhs;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double tail_bound = 0.0;
    double pole_margin = 0.0;  // smallest distance from a certified pole to a contour
    double seconds = 0.0;
};

IdentityResult eval_identity_n2(const TestFunctionJ& J, const ContourParams& p);
IdentityResult eval_identity_n3(const TestFunctionJ& J, const ContourParams& p);

struct MultipleIntegralRow {
    std::string kind;  // "gaudin-mehta" or "laguerre"
    int n = 0;
    double quadrature = 0.0;
    double closed_form = 0.0;       // formula being checked
    double reference = 0.0;         // brute-force ground truth (laguerre: G(n+1) G(n+2))
    double rel_diff = 0.0;          // |quadrature - closed_form| / |closed_form|
    bool closed_form_holds = false;
};

std::vector<MultipleIntegralRow> verify_multiple_integrals(int n_max);

struct SuiteRow {
    std::string identity;
    std::string params;
    cplx lhs, rhs;
    double rel_diff = 0.0;
    double tail_bound = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// quick: residue reductions, the n = 2 matrix and the multiple integrals;
// full adds the two n = 3 configurations.
std::vector<SuiteRow> run_verify_suite(bool full);

} // namespace xxz
