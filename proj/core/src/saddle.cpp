#include "xxz/saddle.hpp"

#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xxz {

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

} // namespace

double carrier_offset(int species, double zeta)
{
    if (species == 0) return 0.0;
    if (species == 1) return 0.5 * pi;
    const StringSpec s = string_exists(species, zeta);
    if (!s.exists) fail(ErrorKind::invalid_string, "no " + std::to_string(species) + "-string at this zeta");
    return s.sigma ? 0.5 * pi : 0.0;
}

cplx u_r(cplx lambda, double v, int species, const DressedSet& ds, int deriv)
{
    if (v == 0.0) fail(ErrorKind::invalid_argument, "u_r: v must be nonzero");
    const int r = species_rank(species);
    if (deriv == 0) return ds.p_r(r, lambda) - ds.eps_r(r, lambda) / v;
    return ds.p_prime_r(r, lambda, deriv - 1) - ds.eps_r(r, lambda, deriv) / v;
}

double v_infinity(const DressedSet& ds)
{
    const double zeta = ds.zeta();
    const Quadrature& qd = ds.eps1().quad();
    double se = 0.0, cp = 0.0;
    for (int j = 0; j < qd.order; ++j) {
        const double mu = qd.nodes[j];
        se += qd.weights[j] * std::sinh(2.0 * mu) * ds.eps1().eval(mu, 1).real();
        cp += qd.weights[j] * std::cosh(2.0 * mu) * ds.p1prime().values()[j].real();
    }
    const double num = 8.0 * pi * ds.J() * std::sin(zeta) - 2.0 * std::cos(zeta) * se;
    const double den = 2.0 * pi - 2.0 * std::cos(zeta) * cp;
    const double v = num / den;

    const double alt = v_infinity_limit_route(ds);
    if (std::abs(v - alt) > 1e-6 * std::abs(v))
        fail(ErrorKind::consistency_failure,
             "v_inf routes disagree: closed form " + fmt(v) + " vs large-lambda limit " + fmt(alt));
    return v;
}

double v_infinity_limit_route(const DressedSet& ds, double lambda)
{
    return (ds.eps1().eval(lambda, 1) / ds.p1prime().eval(lambda)).real();
}

double fermi_velocity(const DressedSet& ds)
{
    const double q = ds.q();
    return (ds.eps1().eval(q, 1) / ds.p1prime().eval(q)).real();
}

cplx velocity_r(cplx lambda, int species, const DressedSet& ds)
{
    const int r = species_rank(species);
    return ds.eps_r(r, lambda, 1) / ds.p_prime_r(r, lambda);
}

void require_noncritical(double v, double v_F, double v_inf)
{
    const double band = 1e-6 * v_inf;
    if (std::abs(std::abs(v) - v_F) <= band)
        fail(ErrorKind::near_critical, "|v| = " + fmt(std::abs(v)) + " is within 1e-6 v_inf of v_F");
    if (std::abs(std::abs(v) - v_inf) <= band)
        fail(ErrorKind::near_critical, "|v| = " + fmt(std::abs(v)) + " is within 1e-6 v_inf of v_inf");
}

SaddleCounter::SaddleCounter(int species, const DressedSet& ds, double L, int grid)
{
    const int r = species_rank(species);
    const double y = carrier_offset(species, ds.zeta());
    x_.resize(grid);
    pp_.resize(grid);
    ep_.resize(grid);
    for (int i = 0; i < grid; ++i) {
        const double x = -L + 2.0 * L * i / (grid - 1);
        x_[i] = x;
        pp_[i] = ds.p_prime_r(r, cplx(x, y)).real();
        ep_[i] = ds.eps_r(r, cplx(x, y), 1).real();
    }
}

int SaddleCounter::count(double v) const
{
    int n = 0;
    double prev = pp_[0] - ep_[0] / v;
    for (std::size_t i = 1; i < x_.size(); ++i) {
        const double cur = pp_[i] - ep_[i] / v;
        if (cur == 0.0) {
            ++n;
            continue;
        }
        if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) ++n;
        prev = cur;
    }
    return n;
}

double SaddleCounter::max_abs_velocity() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) m = std::max(m, std::abs(ep_[i] / pp_[i]));
    return m;
}

Thresholds estimate_thresholds(const SaddleCounter& c, double v_inf, double resolution)
{
    Thresholds t;
    auto total = [&](double V) { return c.count(V) + c.count(-V); };
    const double guard = 1e-6;

    // v^(M): beyond it no zeros for either sign of v
    double lo = v_inf * (1.0 + guard);
    if (total(lo) == 0) {
        t.v_max = v_inf;
    } else {
        double hi = std::max(1.01 * c.max_abs_velocity(), 2.0 * lo);
        while (hi - lo > resolution) {
            const double mid = 0.5 * (lo + hi);
            (total(mid) > 0 ? lo : hi) = mid;
        }
        t.v_max = 0.5 * (lo + hi);
    }

    // v^(m): below it exactly one zero for both signs of v
    auto unique = [&](double V) { return c.count(V) == 1 && c.count(-V) == 1; };
    double top = v_inf * (1.0 - guard);
    if (unique(top)) {
        t.v_min = v_inf;
    } else {
        double a = resolution;
        double b = top;
        if (!unique(a)) {
            t.v_min = 0.0;
        } else {
            while (b - a > resolution) {
                const double mid = 0.5 * (a + b);
                (unique(mid) ? a : b) = mid;
            }
            t.v_min = 0.5 * (a + b);
        }
    }
    return t;
}

std::vector<SaddlePoint> find_saddles(int species, double v, const DressedSet& ds, double L, int grid)
{
    if (v == 0.0) fail(ErrorKind::invalid_argument, "v must be nonzero");
    const double vF = fermi_velocity(ds);
    const double vinf = v_infinity(ds);
    require_noncritical(v, vF, vinf);

    return find_saddles(SaddleCounter(species, ds, L, grid), species, v, ds);
}

std::vector<SaddlePoint> find_saddles(const SaddleCounter& counter, int species, double v, const DressedSet& ds)
{
    if (v == 0.0) fail(ErrorKind::invalid_argument, "v must be nonzero");
    const int r = species_rank(species);
    const double y = carrier_offset(species, ds.zeta());
    const auto& xs = counter.xs();
    auto f = [&](double x) { return u_r(cplx(x, y), v, species, ds, 1).real(); };

    std::vector<double> roots;
    double prev = counter.p_prime()[0] - counter.e_prime()[0] / v;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double cur = counter.p_prime()[i] - counter.e_prime()[i] / v;
        if (cur == 0.0) {
            roots.push_back(xs[i]);
            continue;
        }
        if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) roots.push_back(find_root_bracketed(f, xs[i - 1], xs[i], 1e-14));
        prev = cur;
    }

    std::vector<SaddlePoint> out;
    for (double x : roots) {
        SaddlePoint s;
        s.species = species;
        s.r = r;
        s.omega = cplx(x, y);
        s.u_second = u_r(s.omega, v, species, ds, 2).real();
        const double ref = std::abs(ds.p_prime_r(r, s.omega, 1)) + std::abs(ds.eps_r(r, s.omega, 2) / v);
        if (std::abs(s.u_second) <= 1e-8 * ref) {
            fail(ErrorKind::degenerate_saddle, "double zero of u'_" + std::to_string(r) + " at x = " + fmt(x) +
                                                   " (u'' = " + fmt(s.u_second) + ")");
        }
        s.eps_sign = sgn(s.u_second);
        s.scale = std::sqrt(0.5 * std::abs(s.u_second));
        s.u_value = u_r(s.omega, v, species, ds, 0);
        out.push_back(s);
    }
    return out;
}

const SpeciesStructure* StructureReport::find(int species_id) const
{
    for (const auto& s : species)
        if (s.species == species_id) return &s;
    return nullptr;
}

std::vector<int> species_list(const DressedSet& ds, int r_max)
{
    std::vector<int> out{0, 1};
    for (int r = 2; r <= r_max; ++r)
        if (string_exists(r, ds.zeta()).exists) out.push_back(r);
    return out;
}

StructureReport classify_structure(double v, const DressedSet& ds, int r_max)
{
    StructureReport rep;
    rep.v = v;
    rep.v_F = fermi_velocity(ds);
    rep.v_inf = v_infinity(ds);
    require_noncritical(v, rep.v_F, rep.v_inf);

    const double resolution = 1e-3 * rep.v_inf;
    const bool inside = std::abs(v) < rep.v_inf;
    bool minimal = rep.v_F < rep.v_inf;
    if (!minimal) rep.notes.push_back("v_F >= v_inf");

    for (int sp : species_list(ds, r_max)) {
        SpeciesStructure st;
        st.species = sp;
        const SaddleCounter counter(sp, ds);
        const Thresholds t = estimate_thresholds(counter, rep.v_inf, resolution);
        st.v_min = t.v_min;
        st.v_max = t.v_max;
        st.saddles = find_saddles(counter, sp, v, ds);

        const int n = static_cast<int>(st.saddles.size());
        if ((n % 2 == 1) != inside) {
            rep.notes.push_back("species " + std::to_string(sp) + ": zero count " + std::to_string(n) +
                                " violates the parity rule");
        }
        const int expected = inside ? 1 : 0;
        if (n != expected) {
            minimal = false;
            rep.notes.push_back("species " + std::to_string(sp) + " carries " + std::to_string(n) +
                                " saddles (minimal structure expects " + std::to_string(expected) + ")");
        }
        rep.v_max = std::max(rep.v_max, st.v_max);
        if (sp >= 2 && std::abs(v) < st.v_max) rep.n_sp.push_back(sp);
        rep.species.push_back(std::move(st));
    }
    rep.minimal = minimal;
    return rep;
}

int sign_im_u_at_infinity(int r, double v, double y, int side, const DressedSet& ds, double x)
{
    if (!(std::abs(y) < 0.5 * pi)) fail(ErrorKind::invalid_argument, "y must lie in (-pi/2, pi/2)");
    const cplx lambda(side >= 0 ? x : -x, y);
    const double im = u_r(lambda, v, r, ds, 0).imag();
    if (std::abs(im) < 1e-12)
        fail(ErrorKind::inconclusive, "|Im u_r| = " + fmt(std::abs(im)) + " below 1e-12 at the probe");
    return sgn(im);
}

int sign_im_u_table(int r, double v, double y, int side, double zeta, double v_inf)
{
    const int base = sgn(std::sin(r * zeta) * std::sin(2.0 * y));
    if (std::abs(v) > v_inf) return base;
    const int pm = side >= 0 ? 1 : -1;
    if (v > 0.0) return -pm * base;
    return pm * base;
}

} // namespace xxz
