#pragma once

#include "xxz/kernels.hpp"
#include "xxz/quadrature.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace xxz {

struct ModelParams {
    double J = 1.0;
    double zeta = 0.0;
    std::optional<double> h;  // exactly one of h, q
    std::optional<double> q;
    int order = 128;
};

struct SolveOptions {
    std::optional<std::filesystem::path> cache_dir;  // falls back to XXZ_CACHE_DIR
    double root_tol = 1e-12;
};

double critical_field(double J, double zeta);  // h_c = 8 J cos^2(zeta/2)

void validate(const ModelParams& params);

// Solution of eps(.|Q) on [-Q, Q] for a field h.
GridFunction solve_dressed_energy(const ModelParams& params, double Q);

// H(Q) = 4 pi J sin(zeta) e_Q(Q) / z_Q(Q): the field for which Q is the Fermi endpoint.
double field_for_endpoint(const ModelParams& params, double Q);

// Thermodynamic data at the Fermi endpoint q. Cheap to copy; the dressed
// phase cache is shared between copies.
class DressedSet {
public:
    double J() const;
    double zeta() const;
    double q() const;
    double h() const;
    double h_c() const;
    double p_F() const;
    int order() const;
    const std::vector<std::string>& warnings() const;

    const GridFunction& eps1() const;
    const GridFunction& p1prime() const;
    const GridFunction& Z() const;

    // Continuations built from the nodal values of eps_1 and p'_1; r = 1
    // coincides with the natural extension of eps_1 / p'_1.
    cplx eps_r(int r, cplx lambda, int deriv = 0) const;
    cplx p_prime_r(int r, cplx lambda, int deriv = 0) const;  // deriv 0 -> p'_r, 1 -> p''_r
    cplx p_r(int r, cplx lambda) const;

    // p_1 on the real axis by quadrature of p'_1 from 0 (independent route).
    double p1_by_quadrature(double x) const;

    // phi_r(., mu) as a GridFunction; memoised by (r, mu rounded to 1e-12).
    const GridFunction& phase(int r, cplx mu) const;
    cplx phi(int r, cplx lambda, cplx mu) const;

    double magnetization_density() const;  // D = p_F / pi, cross-checked

    // Fails with pole-proximity when lambda is within `tol` of a pole line of
    // K(lambda - mu | eta), mu in [-q, q].
    void check_pole_lines(cplx lambda, std::initializer_list<double> etas, double tol = 1e-4) const;

    struct State;
    explicit DressedSet(std::shared_ptr<State> state);

private:
    std::shared_ptr<State> s_;
};

DressedSet find_fermi_endpoint(const ModelParams& params, const SolveOptions& options = {});

// Checked accessors mirroring the operations of the dressed solver.
std::function<cplx(cplx)> dressed_energy_r(const DressedSet& ds, int r);
std::function<cplx(cplx)> dressed_momentum(const DressedSet& ds, int r);
const GridFunction& dressed_phase(const DressedSet& ds, int r, cplx mu);
const GridFunction& dressed_charge(const DressedSet& ds);
double magnetization_density(const DressedSet& ds);

struct DressedChecks {
    double eps_at_q = 0.0;           // max |eps_1(+-q)|
    bool eps_sign_pattern = false;   // < 0 inside, > 0 outside and on R + i pi/2
    bool pprime_positive = false;    // min(p'_1(x), -p'_1(x + i pi/2)) > 0
    double identity_charge = 0.0;    // max |Z - (phi_1(., q) - phi_1(., -q) + 1)| on nodes
    double identity_inverse = 0.0;   // |1 + phi_1(q, q) - phi_1(-q, q) - 1/Z(q)|
    double parity = 0.0;             // worst evenness/oddness defect of eps_1, Z, p_1
};

DressedChecks run_dressed_checks(const DressedSet& ds);

} // namespace xxz
