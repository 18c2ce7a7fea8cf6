#pragma once

#include "xxz/dressed.hpp"
#include "xxz/strings.hpp"

#include <map>
#include <vector>

namespace xxz {

// Species label: 0 is the real-line branch of the 1-string (holes and
// particles on R), 1 its R + i pi/2 branch, r >= 2 the r-string on its
// carrier line.
inline int species_rank(int species) { return species == 0 ? 1 : species; }

cplx u_r(cplx lambda, double v, int species, const DressedSet& ds, int deriv = 0);

double v_infinity(const DressedSet& ds);
double v_infinity_limit_route(const DressedSet& ds, double lambda = 15.0);
double fermi_velocity(const DressedSet& ds);
// v_r(lambda) = eps'_r / p'_r
cplx velocity_r(cplx lambda, int species, const DressedSet& ds);

struct SaddlePoint {
    int species = 0;
    int r = 1;
    cplx omega;
    cplx u_value;
    double u_second = 0.0;
    int eps_sign = 0;
    double scale = 0.0;  // sqrt(|u''| / 2)
};

// Imaginary offset of the line on which the species lives.
double carrier_offset(int species, double zeta);

std::vector<SaddlePoint> find_saddles(int species, double v, const DressedSet& ds,
                                      double L = 15.0, int grid = 2000);

struct SpeciesStructure {
    int species = 0;
    std::vector<SaddlePoint> saddles;
    double v_min = 0.0;  // v^(m) estimate
    double v_max = 0.0;  // v^(M) estimate
};

struct StructureReport {
    double v = 0.0;
    double v_F = 0.0;
    double v_inf = 0.0;
    std::vector<SpeciesStructure> species;
    bool minimal = false;
    double v_max = 0.0;  // sup over species of v^(M)
    std::vector<int> n_sp;  // r >= 2 with |v| < v_r^(M)
    std::vector<std::string> notes;

    const SpeciesStructure* find(int species) const;
};

// Species present at this zeta up to r_max: 0, 1 and every existing r >= 2.
std::vector<int> species_list(const DressedSet& ds, int r_max);

// Zero count of d/dlambda u on the carrier line, from a fixed sample grid.
class SaddleCounter {
public:
    SaddleCounter(int species, const DressedSet& ds, double L = 15.0, int grid = 2000);
    int count(double v) const;
    double max_abs_velocity() const;
    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& p_prime() const { return pp_; }
    const std::vector<double>& e_prime() const { return ep_; }

private:
    std::vector<double> x_, pp_, ep_;
};

// Same, reusing a precomputed counter for the species.
std::vector<SaddlePoint> find_saddles(const SaddleCounter& counter, int species, double v, const DressedSet& ds);

struct Thresholds {
    double v_min = 0.0;
    double v_max = 0.0;
};
Thresholds estimate_thresholds(const SaddleCounter& counter, double v_inf, double resolution);

StructureReport classify_structure(double v, const DressedSet& ds, int r_max = 8);

// Numerical sign of Im u_r at x = side * 12 + i y, and the asymptotic table prediction.
int sign_im_u_at_infinity(int r, double v, double y, int side, const DressedSet& ds, double x = 12.0);
int sign_im_u_table(int r, double v, double y, int side, double zeta, double v_inf);

void require_noncritical(double v, double v_F, double v_inf);

} // namespace xxz
