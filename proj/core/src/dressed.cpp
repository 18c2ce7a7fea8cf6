#include "xxz/dressed.hpp"

#include "xxz/cache.hpp"
#include "xxz/errors.hpp"
#include "xxz/strings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace xxz {

namespace {

constexpr cplx I{0.0, 1.0};

KernelFn xxz_kernel(double zeta)
{
    return [zeta](cplx lambda, double mu, int d) { return kernel_k(lambda - mu, zeta, d); };
}

DrivingFn constant_driving(double c)
{
    return [c](cplx, int d) { return d == 0 ? cplx(c) : cplx(0.0); };
}

DrivingFn energy_driving(double h, double J, double zeta)
{
    const double amp = 4.0 * pi * J * std::sin(zeta);
    return [=](cplx lambda, int d) {
        return (d == 0 ? cplx(h) : cplx(0.0)) - amp * kernel_k(lambda, 0.5 * zeta, d);
    };
}

DrivingFn momentum_driving(double zeta)
{
    return [zeta](cplx lambda, int d) { return 2.0 * pi * kernel_k(lambda, 0.5 * zeta, d); };
}

DrivingFn phase_driving(int r, cplx mu, double zeta)
{
    const double half_m = 0.5 * string_combinatorics(r, zeta).m_r;
    return [=](cplx lambda, int d) -> cplx {
        if (d == 0) return bare_phase(lambda - mu, r, zeta) / (2.0 * pi) + half_m;
        return kernel_kr(lambda - mu, r, zeta, d - 1);
    };
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// iπ-periodic reduction of Im(lambda) into (-pi/2, pi/2]
cplx reduce_strip(cplx lambda)
{
    double y = lambda.imag();
    if (y > 0.5 * pi || y <= -0.5 * pi) {
        const double k = std::ceil((y - 0.5 * pi) / pi);
        y -= k * pi;
        if (std::abs(y - 0.5 * pi) < 1e-14) y = 0.5 * pi;
        if (std::abs(y + 0.5 * pi) < 1e-14) y = 0.5 * pi;
    }
    return {lambda.real(), y};
}

} // namespace

double critical_field(double J, double zeta)
{
    const double c = std::cos(0.5 * zeta);
    return 8.0 * J * c * c;
}

void validate(const ModelParams& p)
{
    if (!(p.J > 0.0)) fail(ErrorKind::invalid_argument, "J must be positive");
    if (!(p.zeta > 0.0 && p.zeta < pi)) fail(ErrorKind::invalid_argument, "zeta must lie in (0, pi)");
    if (p.h.has_value() == p.q.has_value())
        fail(ErrorKind::invalid_argument, "exactly one of h and q must be given");
    if (p.q && !(*p.q > 0.0)) fail(ErrorKind::invalid_argument, "q must be positive");
    if (p.h && !(*p.h > 0.0)) fail(ErrorKind::invalid_argument, "h must be positive");
    if (p.order < 2) fail(ErrorKind::invalid_argument, "quadrature order must be >= 2");
}

GridFunction solve_dressed_energy(const ModelParams& params, double Q)
{
    if (!params.h) fail(ErrorKind::invalid_argument, "solve_dressed_energy needs h");
    NystromSolver solver(xxz_kernel(params.zeta), Q, params.order, "K(.|zeta)");
    return solver.solve(energy_driving(*params.h, params.J, params.zeta), "h-4piJ sin(zeta)K(.|zeta/2)");
}

double field_for_endpoint(const ModelParams& params, double Q)
{
    if (Q <= 0.0) return critical_field(params.J, params.zeta);
    NystromSolver solver(xxz_kernel(params.zeta), Q, params.order, "K(.|zeta)");
    const GridFunction z = solver.solve(constant_driving(1.0), "1");
    const GridFunction e = solver.solve(
        [zeta = params.zeta](cplx l, int d) { return kernel_k(l, 0.5 * zeta, d); }, "K(.|zeta/2)");
    return 4.0 * pi * params.J * std::sin(params.zeta) * e.eval(Q).real() / z.eval(Q).real();
}

struct DressedSet::State {
    double J = 1.0, zeta = 0.0, q = 0.0, h = 0.0, h_c = 0.0, p_F = 0.0;
    int order = 128;
    std::vector<std::string> warnings;
    std::unique_ptr<NystromSolver> solver;
    GridFunction eps1, p1prime, Z;
    std::optional<DiskCache> cache;

    mutable std::mutex phase_mutex;
    mutable std::map<std::tuple<int, long long, long long>, std::unique_ptr<GridFunction>> phases;
};

DressedSet::DressedSet(std::shared_ptr<State> state) : s_(std::move(state)) {}

double DressedSet::J() const { return s_->J; }
double DressedSet::zeta() const { return s_->zeta; }
double DressedSet::q() const { return s_->q; }
double DressedSet::h() const { return s_->h; }
double DressedSet::h_c() const { return s_->h_c; }
double DressedSet::p_F() const { return s_->p_F; }
int DressedSet::order() const { return s_->order; }
const std::vector<std::string>& DressedSet::warnings() const { return s_->warnings; }
const GridFunction& DressedSet::eps1() const { return s_->eps1; }
const GridFunction& DressedSet::p1prime() const { return s_->p1prime; }
const GridFunction& DressedSet::Z() const { return s_->Z; }

void DressedSet::check_pole_lines(cplx lambda, std::initializer_list<double> etas, double tol) const
{
    const double x = lambda.real();
    const double dx = std::max(0.0, std::abs(x) - s_->q);
    if (dx >= tol) return;
    for (double eta : etas) {
        if (std::abs(std::sin(2.0 * eta)) < 1e-15) continue;
        for (double base : {eta, -eta}) {
            double d = lambda.imag() - base;
            d -= pi * std::round(d / pi);
            if (std::hypot(dx, d) < tol) {
                fail(ErrorKind::pole_proximity,
                     "evaluation point (" + fmt(lambda.real()) + ", " + fmt(lambda.imag()) +
                         ") lies within " + fmt(tol) + " of a kernel pole line");
            }
        }
    }
}

cplx DressedSet::eps_r(int r, cplx lambda, int deriv) const
{
    const double zeta = s_->zeta;
    check_pole_lines(lambda, {0.5 * zeta * (r + 1), 0.5 * zeta * (r - 1)});
    cplx v = (deriv == 0 ? r * s_->h : 0.0) -
             4.0 * pi * s_->J * std::sin(zeta) * kernel_k(lambda, 0.5 * r * zeta, deriv);
    const Quadrature& qd = s_->eps1.quad();
    const auto& e = s_->eps1.values();
    for (int j = 0; j < qd.order; ++j)
        v -= qd.weights[j] * kernel_kr(lambda - qd.nodes[j], r, zeta, deriv) * e[j];
    return v;
}

cplx DressedSet::p_prime_r(int r, cplx lambda, int deriv) const
{
    const double zeta = s_->zeta;
    check_pole_lines(lambda, {0.5 * zeta * (r + 1), 0.5 * zeta * (r - 1)});
    cplx v = 2.0 * pi * kernel_k(lambda, 0.5 * r * zeta, deriv);
    const Quadrature& qd = s_->p1prime.quad();
    const auto& p = s_->p1prime.values();
    for (int j = 0; j < qd.order; ++j)
        v -= qd.weights[j] * kernel_kr(lambda - qd.nodes[j], r, zeta, deriv) * p[j];
    return v;
}

namespace {

cplx p_r_core(int r, cplx lambda, double zeta, const GridFunction& p1prime)
{
    cplx v = bare_phase_1(lambda, 0.5 * r * zeta);
    const Quadrature& qd = p1prime.quad();
    const auto& p = p1prime.values();
    cplx acc = 0.0;
    for (int j = 0; j < qd.order; ++j) acc += qd.weights[j] * bare_phase(lambda - qd.nodes[j], r, zeta) * p[j];
    return v - acc / (2.0 * pi);
}

} // namespace

cplx DressedSet::p_r(int r, cplx lambda) const
{
    const double zeta = s_->zeta;
    const cplx l = reduce_strip(lambda);
    const StringCombinatorics sc = string_combinatorics(r, zeta);
    cplx v = p_r_core(r, l, zeta, s_->p1prime) + pi * sc.ell_r - s_->p_F * sc.m_r;
    for (int sigma : {+1, -1}) {
        if (sigma == -1 && r == 1) continue;
        const double w = hat(0.5 * (r + sigma) * zeta);
        const double thr = std::min(w, pi - w);
        // At hat(w) = pi/2 the one-sided limits are -+2 p_F; sgn(0) = 0 takes
        // their average.
        if (std::abs(l.imag()) >= thr && std::abs(w - 0.5 * pi) >= 1e-14)
            v -= 2.0 * s_->p_F * (1.0 - 2.0 * w / pi > 0.0 ? 1.0 : -1.0);
    }
    return v;
}

double DressedSet::p1_by_quadrature(double x) const
{
    if (x == 0.0) return 0.0;
    const Quadrature g = gauss_legendre(64, std::min(0.0, x), std::max(0.0, x));
    double s = 0.0;
    for (int j = 0; j < g.order; ++j) s += g.weights[j] * s_->p1prime.eval(g.nodes[j]).real();
    return x > 0.0 ? s : -s;
}

const GridFunction& DressedSet::phase(int r, cplx mu) const
{
    const auto key = std::make_tuple(r, std::llround(mu.real() * 1e12), std::llround(mu.imag() * 1e12));
    std::lock_guard<std::mutex> lock(s_->phase_mutex);
    if (auto it = s_->phases.find(key); it != s_->phases.end()) return *it->second;

    const std::string id = "theta_" + std::to_string(r) + "(.-mu)/2pi+m_r/2";
    const DrivingFn drive = phase_driving(r, mu, s_->zeta);
    CacheKey ck{"phase",
                {{"r", double(r)},
                 {"mu_re", std::get<1>(key) * 1e-12},
                 {"mu_im", std::get<2>(key) * 1e-12},
                 {"order", double(s_->order)},
                 {"zeta", s_->zeta},
                 {"q", s_->q}}};
    std::unique_ptr<GridFunction> gf;
    if (s_->cache) {
        if (auto rec = s_->cache->load(ck))
            gf = std::make_unique<GridFunction>(s_->solver->adopt(rec->values, drive, id));
    }
    if (!gf) {
        gf = std::make_unique<GridFunction>(s_->solver->solve(drive, id));
        if (s_->cache)
            s_->cache->store(ck, {{{"r", double(r)}, {"mu_re", mu.real()}, {"mu_im", mu.imag()}},
                                  gf->quad().nodes, gf->quad().weights, gf->values()});
    }
    const GridFunction& ref = *gf;
    s_->phases.emplace(key, std::move(gf));
    return ref;
}

cplx DressedSet::phi(int r, cplx lambda, cplx mu) const
{
    return phase(r, mu).eval(lambda);
}

double DressedSet::magnetization_density() const
{
    const double d_fermi = s_->p_F / pi;
    double integral = 0.0;
    const Quadrature& qd = s_->p1prime.quad();
    for (int j = 0; j < qd.order; ++j) integral += qd.weights[j] * s_->p1prime.values()[j].real();
    const double d_density = integral / (2.0 * pi);
    if (std::abs(d_fermi - d_density) > 1e-10)
        fail(ErrorKind::consistency_failure, "density routes disagree: p_F/pi = " + fmt(d_fermi) +
                                                 ", int rho = " + fmt(d_density));
    return d_fermi;
}

DressedSet find_fermi_endpoint(const ModelParams& params, const SolveOptions& options)
{
    validate(params);
    auto st = std::make_shared<DressedSet::State>();
    st->J = params.J;
    st->zeta = params.zeta;
    st->order = params.order;
    st->h_c = critical_field(params.J, params.zeta);
    st->cache = DiskCache::resolve(options.cache_dir);
    if (auto pq = near_rational(params.zeta)) {
        st->warnings.push_back("zeta/pi is within 1e-9 of the rational " + std::to_string(pq->first) +
                               "/" + std::to_string(pq->second));
    }

    const bool h_mode = params.h.has_value();
    const double input = h_mode ? *params.h : *params.q;
    auto key_for = [&](const std::string& kind) {
        return CacheKey{kind,
                        {{"zeta", params.zeta},
                         {h_mode ? "h" : "q", input},
                         {"J", params.J},
                         {"order", double(params.order)}}};
    };

    std::optional<CacheRecord> rec_eps, rec_pp, rec_z;
    if (st->cache) {
        rec_eps = st->cache->load(key_for("eps1"));
        rec_pp = st->cache->load(key_for("p1prime"));
        rec_z = st->cache->load(key_for("Z"));
    }
    const bool hit = rec_eps && rec_pp && rec_z && rec_eps->meta_value("q") && rec_eps->meta_value("h");

    if (hit) {
        st->q = *rec_eps->meta_value("q");
        st->h = *rec_eps->meta_value("h");
    } else if (h_mode) {
        const double h = *params.h;
        if (!(h < st->h_c)) {
            fail(ErrorKind::bracket_failure, "h = " + fmt(h) + " is not below the critical field h_c = " +
                                                 fmt(st->h_c) + "; no Fermi zone exists");
        }
        auto g = [&](double Q) { return field_for_endpoint(params, Q) - h; };
        double hi = 1.0;
        while (g(hi) > 0.0) {
            hi *= 2.0;
            if (hi > 1e3) fail(ErrorKind::bracket_failure, "Fermi endpoint search did not bracket a root");
        }
        st->q = find_root_bracketed(g, 0.0, hi, options.root_tol);
        st->h = h;
        if (!(st->q > 0.0)) fail(ErrorKind::bracket_failure, "Fermi endpoint collapsed to zero");
    } else {
        st->q = *params.q;
        st->h = field_for_endpoint(params, st->q);
    }

    st->solver = std::make_unique<NystromSolver>(xxz_kernel(params.zeta), st->q, params.order, "K(.|zeta)");
    const DrivingFn de = energy_driving(st->h, params.J, params.zeta);
    const DrivingFn dp = momentum_driving(params.zeta);
    const DrivingFn dz = constant_driving(1.0);
    if (hit) {
        st->eps1 = st->solver->adopt(rec_eps->values, de, "eps-driving");
        st->p1prime = st->solver->adopt(rec_pp->values, dp, "2piK(.|zeta/2)");
        st->Z = st->solver->adopt(rec_z->values, dz, "1");
    } else {
        st->eps1 = st->solver->solve(de, "eps-driving");
        st->p1prime = st->solver->solve(dp, "2piK(.|zeta/2)");
        st->Z = st->solver->solve(dz, "1");
        if (st->cache) {
            const std::vector<std::pair<std::string, double>> meta{
                {"zeta", params.zeta}, {"J", params.J}, {"q", st->q}, {"h", st->h}, {"order", double(params.order)}};
            const Quadrature& qd = st->solver->quad();
            st->cache->store(key_for("eps1"), {meta, qd.nodes, qd.weights, st->eps1.values()});
            st->cache->store(key_for("p1prime"), {meta, qd.nodes, qd.weights, st->p1prime.values()});
            st->cache->store(key_for("Z"), {meta, qd.nodes, qd.weights, st->Z.values()});
        }
    }

    const double eq = std::max(std::abs(st->eps1.eval(st->q)), std::abs(st->eps1.eval(-st->q)));
    if (eq > 1e-8 * st->h)
        fail(ErrorKind::solver_failure, "eps_1(+-q) = " + fmt(eq) + " exceeds 1e-8 h");

    st->p_F = p_r_core(1, st->q, params.zeta, st->p1prime).real();
    return DressedSet(st);
}

std::function<cplx(cplx)> dressed_energy_r(const DressedSet& ds, int r)
{
    if (!string_exists(r, ds.zeta()).exists)
        fail(ErrorKind::invalid_string, "no " + std::to_string(r) + "-string at this zeta");
    return [ds, r](cplx l) { return ds.eps_r(r, l); };
}

std::function<cplx(cplx)> dressed_momentum(const DressedSet& ds, int r)
{
    if (!string_exists(r, ds.zeta()).exists)
        fail(ErrorKind::invalid_string, "no " + std::to_string(r) + "-string at this zeta");
    return [ds, r](cplx l) { return ds.p_r(r, l); };
}

const GridFunction& dressed_phase(const DressedSet& ds, int r, cplx mu) { return ds.phase(r, mu); }
const GridFunction& dressed_charge(const DressedSet& ds) { return ds.Z(); }
double magnetization_density(const DressedSet& ds) { return ds.magnetization_density(); }

DressedChecks run_dressed_checks(const DressedSet& ds)
{
    DressedChecks c;
    const double q = ds.q();
    c.eps_at_q = std::max(std::abs(ds.eps1().eval(q)), std::abs(ds.eps1().eval(-q)));

    bool sign_ok = true;
    for (int i = 1; i <= 50; ++i) {
        const double x = -q + 2.0 * q * i / 51.0;
        sign_ok = sign_ok && ds.eps1().eval(x).real() < 0.0;
    }
    for (int i = 0; i <= 50; ++i) {
        const double x = q + 0.1 + 4.9 * i / 50.0;
        sign_ok = sign_ok && ds.eps1().eval(x).real() > 0.0 && ds.eps1().eval(-x).real() > 0.0;
        const double y = -8.0 + 16.0 * i / 50.0;
        sign_ok = sign_ok && ds.eps_r(1, cplx(y, 0.5 * pi)).real() > 0.0;
    }
    c.eps_sign_pattern = sign_ok;

    bool pp = true;
    for (int i = 0; i <= 60; ++i) {
        const double x = -10.0 + 20.0 * i / 60.0;
        pp = pp && std::min(ds.p_prime_r(1, x).real(), -ds.p_prime_r(1, cplx(x, 0.5 * pi)).real()) > 0.0;
    }
    c.pprime_positive = pp;

    const GridFunction& pq = ds.phase(1, q);
    const GridFunction& mq = ds.phase(1, -q);
    const Quadrature& qd = ds.Z().quad();
    for (int j = 0; j < qd.order; ++j) {
        const cplx lhs = pq.values()[j] - mq.values()[j] + 1.0;
        c.identity_charge = std::max(c.identity_charge, std::abs(lhs - ds.Z().values()[j]));
    }
    const cplx inv = 1.0 + pq.eval(q) - pq.eval(-q);
    c.identity_inverse = std::abs(inv - 1.0 / ds.Z().eval(q));

    double par = 0.0;
    for (int j = 0; j < qd.order; ++j) {
        const int k = qd.order - 1 - j;
        par = std::max(par, std::abs(ds.eps1().values()[j] - ds.eps1().values()[k]));
        par = std::max(par, std::abs(ds.Z().values()[j] - ds.Z().values()[k]));
        par = std::max(par, std::abs(ds.p_r(1, qd.nodes[j]) + ds.p_r(1, qd.nodes[k])));
    }
    c.parity = par;
    return c;
}

} // namespace xxz
