#pragma once

#include "xxz/dressed.hpp"
#include "xxz/saddle.hpp"
#include "xxz/strings.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xxz {

enum class Regime { conformal, space_like, time_like, general };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

// Conformal beyond v_max (v_inf in the minimal case), general when the
// structure is not minimal, otherwise split at v_F.
Regime infer_regime(const StructureReport& structure);

// kappa_v: +1 above the Fermi velocity, -1 below it.
int kappa(double v, double v_F);

struct ExcitationConfig {
    int ell_plus = 0;
    int ell_minus = 0;
    int n0 = 0;
    int n1 = 0;
    std::map<int, std::vector<int>> n_r;  // r >= 2 -> count per saddle index
    int s_gamma = 0;

    // Sum of r n_r^(a) over r >= 2.
    int string_charge() const;
    // Flattened counts (n0, n1, n_r^(a) ...) in species order.
    std::vector<int> counts() const;
    bool satisfies_constraint(int kappa_v) const;
    std::string label() const;
};

bool config_less(const ExcitationConfig& a, const ExcitationConfig& b);

struct RapiditySet {
    int s_gamma = 0;
    int ell_plus = 0;
    int ell_minus = 0;
    std::vector<double> holes;
    std::vector<cplx> particles;                 // 1-strings on R \ (-q, q) or R + i pi/2
    std::map<int, std::vector<cplx>> strings;    // r >= 2 on R + i sigma_r pi/2
};

struct EnergyMomentum {
    double E = 0.0;
    double P = 0.0;
    cplx U;
};

EnergyMomentum excitation_energy_momentum(const RapiditySet& Y, double v, const DressedSet& ds);

// theta(omega | Y): minus the shift function of the excitation.
double shift_exponent(cplx omega, const RapiditySet& Y, const DressedSet& ds);
// theta_upsilon(Y) = theta(upsilon q | Y) - upsilon ell_upsilon.
double theta_upsilon(const RapiditySet& Y, int upsilon, const DressedSet& ds);

// Closed form l Z(q) - upsilon s / (2 Z(q)) quoted for the conformal exponents.
double conformal_exponent_closed_form(int ell, int s_gamma, int upsilon, double Zq);
RapiditySet conformal_rapidities(int ell, int s_gamma);

// Saddle points assigned to the counts of a configuration.
struct SaddleAssignment {
    int kappa_v = 1;
    std::optional<SaddlePoint> omega0;
    std::optional<SaddlePoint> omega1;
    std::map<int, std::vector<SaddlePoint>> strings;
};

SaddleAssignment assign_saddles(const StructureReport& structure, const DressedSet& ds, Regime regime);

std::vector<ExcitationConfig> enumerate_configs(int s_gamma, Regime regime, int bound,
                                                const std::vector<StringSpec>& catalog,
                                                const StructureReport& structure);

struct AmplitudePlaceholder {
    std::string token;        // opaque name of the non-universal amplitude
    double weight = 1.0;
    RapiditySet rapidities;   // saddle-point rapidity set of the term
};

struct AsymptoticTerm {
    ExcitationConfig config;
    Regime regime = Regime::conformal;
    cplx C_n{1.0, 0.0};
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    double delta_sp = 0.0;
    double phase = 0.0;       // varphi_n(v)
    double wavevector = 0.0;  // p_F (ell_+ - ell_-) + pi s_gamma
    AmplitudePlaceholder amplitude_placeholder;

    double decay_exponent() const { return delta_plus * delta_plus + delta_minus * delta_minus + delta_sp; }
};

AsymptoticTerm assemble_term(const ExcitationConfig& config, double v, const DressedSet& ds,
                             const StructureReport& structure, std::optional<Regime> regime = std::nullopt);

std::vector<AsymptoticTerm> rank_terms(std::vector<AsymptoticTerm> terms);

} // namespace xxz
