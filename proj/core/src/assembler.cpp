#include "xxz/assembler.hpp"

#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace xxz {

namespace {

constexpr double domain_tol = 1e-12;

// Imaginary part reduced into (-pi/2, pi/2].
double reduced_imag(cplx z)
{
    double y = std::fmod(z.imag(), pi);
    if (y <= -0.5 * pi) y += pi;
    if (y > 0.5 * pi) y -= pi;
    return y;
}

bool on_line(cplx z, int sigma)
{
    const double y = reduced_imag(z);
    if (sigma == 0) return std::abs(y) <= domain_tol;
    return std::abs(std::abs(y) - 0.5 * pi) <= domain_tol;
}

std::string fmt(cplx z)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

void check_domain(const RapiditySet& Y, const DressedSet& ds)
{
    const double q = ds.q();
    for (double mu : Y.holes)
        if (!(std::abs(mu) <= q + domain_tol))
            fail(ErrorKind::invalid_argument, "hole rapidity " + fmt(mu) + " outside [-q, q]");
    for (cplx nu : Y.particles) {
        const bool real_branch = on_line(nu, 0) && std::abs(nu.real()) >= q - domain_tol;
        if (!real_branch && !on_line(nu, 1))
            fail(ErrorKind::invalid_argument, "particle rapidity " + fmt(nu) + " off R \\ (-q, q) and R + i pi/2");
    }
    for (const auto& [r, list] : Y.strings) {
        if (list.empty()) continue;
        const StringSpec ex = string_exists(r, ds.zeta());
        if (!ex.exists) fail(ErrorKind::invalid_string, std::to_string(r) + "-string does not exist at this zeta");
        for (cplx nu : list)
            if (!on_line(nu, ex.sigma))
                fail(ErrorKind::invalid_argument,
                     std::to_string(r) + "-string rapidity " + fmt(nu) + " off its carrier line");
    }
}

// Principal-branch power with argument in (-pi, pi].
cplx principal_pow(cplx base, double x)
{
    if (x == 0.0) return 1.0;
    return std::exp(x * std::log(base));
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

} // namespace

std::string to_string(Regime regime)
{
    switch (regime) {
    case Regime::conformal: return "conformal";
    case Regime::space_like: return "space-like";
    case Regime::time_like: return "time-like";
    case Regime::general: return "general";
    }
    return "unknown";
}

Regime regime_from_string(const std::string& name)
{
    for (Regime r : {Regime::conformal, Regime::space_like, Regime::time_like, Regime::general})
        if (to_string(r) == name) return r;
    fail(ErrorKind::invalid_argument, "unknown regime '" + name + "'");
}

int kappa(double v, double v_F) { return std::abs(v) > v_F ? 1 : -1; }

Regime infer_regime(const StructureReport& s)
{
    const double edge = s.minimal ? s.v_inf : std::max(s.v_inf, s.v_max);
    if (std::abs(s.v) > edge) return Regime::conformal;
    if (!s.minimal) return Regime::general;
    return std::abs(s.v) > s.v_F ? Regime::space_like : Regime::time_like;
}

int ExcitationConfig::string_charge() const
{
    int c = 0;
    for (const auto& [r, list] : n_r)
        for (int n : list) c += r * n;
    return c;
}

std::vector<int> ExcitationConfig::counts() const
{
    std::vector<int> out{n0, n1};
    for (const auto& [r, list] : n_r) out.insert(out.end(), list.begin(), list.end());
    return out;
}

bool ExcitationConfig::satisfies_constraint(int kappa_v) const
{
    return s_gamma == ell_plus + ell_minus + kappa_v * n0 + n1 + string_charge();
}

std::string ExcitationConfig::label() const
{
    std::ostringstream os;
    os << '(' << ell_plus << ',' << ell_minus << ';' << n0 << ',' << n1;
    for (const auto& [r, list] : n_r) {
        os << ';' << r << ':';
        for (std::size_t a = 0; a < list.size(); ++a) os << (a ? "," : "") << list[a];
    }
    os << ')';
    return os.str();
}

bool config_less(const ExcitationConfig& a, const ExcitationConfig& b)
{
    if (a.ell_plus != b.ell_plus) return a.ell_plus < b.ell_plus;
    if (a.ell_minus != b.ell_minus) return a.ell_minus < b.ell_minus;
    const auto ca = a.counts();
    const auto cb = b.counts();
    return ca < cb;
}

EnergyMomentum excitation_energy_momentum(const RapiditySet& Y, double v, const DressedSet& ds)
{
    if (v == 0.0) fail(ErrorKind::invalid_argument, "v must be nonzero");
    check_domain(Y, ds);
    double E = 0.0;
    double P = 0.0;
    for (double mu : Y.holes) {
        E -= ds.eps_r(1, mu).real();
        P -= ds.p_r(1, mu).real();
    }
    for (cplx nu : Y.particles) {
        E += ds.eps_r(1, nu).real();
        P += ds.p_r(1, nu).real();
    }
    for (const auto& [r, list] : Y.strings)
        for (cplx nu : list) {
            E += ds.eps_r(r, nu).real();
            P += ds.p_r(r, nu).real();
        }
    P += ds.p_F() * (Y.ell_plus - Y.ell_minus) + pi * Y.s_gamma;
    return {E, P, cplx(P - E / v - pi * Y.s_gamma, 0.0)};
}

double shift_exponent(cplx omega, const RapiditySet& Y, const DressedSet& ds)
{
    check_domain(Y, ds);
    const double q = ds.q();
    cplx t = 0.5 * Y.s_gamma * ds.Z().eval(omega);
    for (double mu : Y.holes) t += ds.phi(1, omega, mu);
    for (cplx nu : Y.particles) t -= ds.phi(1, omega, nu);
    for (const auto& [r, list] : Y.strings)
        for (cplx nu : list) t -= ds.phi(r, omega, nu);
    if (Y.ell_plus != 0) t -= double(Y.ell_plus) * ds.phi(1, omega, q);
    if (Y.ell_minus != 0) t -= double(Y.ell_minus) * ds.phi(1, omega, -q);
    return t.real();
}

double theta_upsilon(const RapiditySet& Y, int upsilon, const DressedSet& ds)
{
    if (upsilon != 1 && upsilon != -1) fail(ErrorKind::invalid_argument, "upsilon must be +1 or -1");
    const int ell = upsilon > 0 ? Y.ell_plus : Y.ell_minus;
    return shift_exponent(upsilon * ds.q(), Y, ds) - upsilon * ell;
}

double conformal_exponent_closed_form(int ell, int s_gamma, int upsilon, double Zq)
{
    return ell * Zq - upsilon * s_gamma / (2.0 * Zq);
}

RapiditySet conformal_rapidities(int ell, int s_gamma)
{
    RapiditySet Y;
    Y.s_gamma = s_gamma;
    Y.ell_plus = ell + s_gamma;
    Y.ell_minus = -ell;
    return Y;
}

SaddleAssignment assign_saddles(const StructureReport& s, const DressedSet& ds, Regime regime)
{
    SaddleAssignment out;
    out.kappa_v = kappa(s.v, s.v_F);
    if (regime == Regime::conformal) return out;

    std::vector<SaddlePoint> ones;
    for (int sp : {0, 1})
        if (const auto* st = s.find(sp)) ones.insert(ones.end(), st->saddles.begin(), st->saddles.end());

    if (out.kappa_v < 0) {
        // omega_0 is the hole saddle inside the Fermi zone
        auto it = std::find_if(ones.begin(), ones.end(), [&](const SaddlePoint& p) {
            return p.species == 0 && std::abs(p.omega.real()) < ds.q();
        });
        if (it != ones.end()) {
            out.omega0 = *it;
            ones.erase(it);
        }
        if (!ones.empty()) out.omega1 = ones.front();
    } else {
        if (!ones.empty()) out.omega0 = ones[0];
        if (ones.size() > 1) out.omega1 = ones[1];
    }

    for (const auto& st : s.species) {
        if (st.species < 2) continue;
        if (regime == Regime::general &&
            std::find(s.n_sp.begin(), s.n_sp.end(), st.species) == s.n_sp.end())
            continue;
        if (!st.saddles.empty()) out.strings[st.species] = st.saddles;
    }
    return out;
}

std::vector<ExcitationConfig> enumerate_configs(int s_gamma, Regime regime, int bound,
                                                const std::vector<StringSpec>& catalog,
                                                const StructureReport& structure)
{
    if (bound < 0) fail(ErrorKind::invalid_argument, "bound must be nonnegative");
    std::vector<ExcitationConfig> out;

    if (regime == Regime::conformal) {
        for (int ell = -bound - std::abs(s_gamma); ell <= bound + std::abs(s_gamma); ++ell) {
            ExcitationConfig c;
            c.s_gamma = s_gamma;
            c.ell_plus = ell + s_gamma;
            c.ell_minus = -ell;
            if (std::abs(c.ell_plus) <= bound && std::abs(c.ell_minus) <= bound) out.push_back(c);
        }
        std::sort(out.begin(), out.end(), config_less);
        return out;
    }

    const int kv = kappa(structure.v, structure.v_F);

    // Slots: n0, n1, then every string saddle.
    int n_ones = 2;
    std::vector<std::pair<int, int>> string_slots;  // (r, saddle count)
    if (regime == Regime::general) {
        n_ones = 0;
        for (int sp : {0, 1})
            if (const auto* st = structure.find(sp)) n_ones += static_cast<int>(st->saddles.size());
        n_ones = std::min(n_ones, 2);
        for (const auto& spec : catalog) {
            if (spec.r < 2 || !spec.exists) continue;
            if (std::find(structure.n_sp.begin(), structure.n_sp.end(), spec.r) == structure.n_sp.end()) continue;
            const auto* st = structure.find(spec.r);
            const int count = st ? static_cast<int>(st->saddles.size()) : 0;
            if (count > 0) string_slots.emplace_back(spec.r, count);
        }
    } else {
        for (const auto& spec : catalog)
            if (spec.r >= 2 && spec.exists) string_slots.emplace_back(spec.r, 1);
    }

    std::vector<int> slot_rank;
    for (int i = 0; i < n_ones; ++i) slot_rank.push_back(i == 0 ? kv : 1);
    for (const auto& [r, count] : string_slots)
        for (int a = 0; a < count; ++a) slot_rank.push_back(r);

    std::vector<int> n(slot_rank.size(), 0);
    while (true) {
        int charge = 0;
        for (std::size_t i = 0; i < n.size(); ++i) charge += slot_rank[i] * n[i];
        for (int lp = -bound; lp <= bound; ++lp) {
            const int lm = s_gamma - lp - charge;
            if (std::abs(lm) > bound) continue;
            ExcitationConfig c;
            c.s_gamma = s_gamma;
            c.ell_plus = lp;
            c.ell_minus = lm;
            std::size_t i = 0;
            if (n_ones > 0) c.n0 = n[i++];
            if (n_ones > 1) c.n1 = n[i++];
            for (const auto& [r, count] : string_slots) {
                auto& list = c.n_r[r];
                for (int a = 0; a < count; ++a) list.push_back(n[i++]);
            }
            out.push_back(std::move(c));
        }
        std::size_t k = 0;
        while (k < n.size() && n[k] == bound) n[k++] = 0;
        if (k == n.size()) break;
        ++n[k];
    }
    std::sort(out.begin(), out.end(), config_less);
    return out;
}

AsymptoticTerm assemble_term(const ExcitationConfig& config, double v, const DressedSet& ds,
                             const StructureReport& structure, std::optional<Regime> regime_override)
{
    if (std::abs(structure.v - v) > 1e-14 * std::max(1.0, std::abs(v)))
        fail(ErrorKind::invalid_argument, "structure report was computed at a different velocity");
    const Regime regime = regime_override.value_or(infer_regime(structure));

    AsymptoticTerm t;
    t.config = config;
    t.regime = regime;
    t.wavevector = ds.p_F() * (config.ell_plus - config.ell_minus) + pi * config.s_gamma;

    RapiditySet Y;
    Y.s_gamma = config.s_gamma;
    Y.ell_plus = config.ell_plus;
    Y.ell_minus = config.ell_minus;

    if (regime == Regime::conformal) {
        if (config.n0 || config.n1 || config.string_charge())
            fail(ErrorKind::regime_mismatch, "massive counts are not allowed in the conformal regime");
    } else {
        const SaddleAssignment sa = assign_saddles(structure, ds, regime);
        if (!config.satisfies_constraint(sa.kappa_v))
            fail(ErrorKind::invalid_argument, "configuration " + config.label() + " violates the spin constraint");

        cplx C = 1.0;
        double phase = 0.0;
        double dsp = 0.0;
        auto add = [&](const SaddlePoint& p, int n, cplx curvature_factor) {
            const int sg = sign_of(ds.p_prime_r(p.r, p.omega).real());
            C *= barnes_g(1 + n) * (n % 2 ? double(sg) : 1.0) / std::pow(2.0 * pi, 0.5 * n);
            C *= principal_pow(curvature_factor, 0.5 * n * n);
            dsp += 0.5 * n * n;
        };

        if (config.n0 > 0) {
            if (!sa.omega0) fail(ErrorKind::regime_mismatch, "no omega_0 saddle at this velocity");
            add(*sa.omega0, config.n0, cplx(0.0, sa.kappa_v) / sa.omega0->u_second);
            phase += sa.kappa_v * config.n0 * sa.omega0->u_value.real();
            for (int k = 0; k < config.n0; ++k) {
                if (sa.kappa_v < 0)
                    Y.holes.push_back(sa.omega0->omega.real());
                else
                    Y.particles.push_back(sa.omega0->omega);
            }
        }
        if (config.n1 > 0) {
            if (!sa.omega1) fail(ErrorKind::regime_mismatch, "no omega_1 saddle at this velocity");
            add(*sa.omega1, config.n1, cplx(0.0, 1.0) / sa.omega1->u_second);
            phase += config.n1 * sa.omega1->u_value.real();
            for (int k = 0; k < config.n1; ++k) Y.particles.push_back(sa.omega1->omega);
        }
        for (const auto& [r, list] : config.n_r) {
            for (std::size_t a = 0; a < list.size(); ++a) {
                const int n = list[a];
                if (n == 0) continue;
                const auto it = sa.strings.find(r);
                if (it == sa.strings.end() || a >= it->second.size())
                    fail(ErrorKind::regime_mismatch,
                         "no saddle #" + std::to_string(a + 1) + " for the " + std::to_string(r) + "-string");
                const SaddlePoint& p = it->second[a];
                add(p, n, 1.0 / cplx(0.0, -p.u_second));
                phase += n * p.u_value.real();
                for (int k = 0; k < n; ++k) Y.strings[r].push_back(p.omega);
            }
        }
        t.C_n = C;
        t.phase = phase;
        t.delta_sp = dsp;
    }

    t.delta_plus = theta_upsilon(Y, +1, ds);
    t.delta_minus = theta_upsilon(Y, -1, ds);
    t.amplitude_placeholder.token = "F" + config.label();
    t.amplitude_placeholder.rapidities = Y;
    return t;
}

std::vector<AsymptoticTerm> rank_terms(std::vector<AsymptoticTerm> terms)
{
    std::stable_sort(terms.begin(), terms.end(), [](const AsymptoticTerm& a, const AsymptoticTerm& b) {
        const double ea = a.decay_exponent();
        const double eb = b.decay_exponent();
        if (ea != eb) return ea < eb;
        return config_less(a.config, b.config);
    });
    return terms;
}

} // namespace xxz
