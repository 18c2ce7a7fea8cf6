#include "xxz/kernels.hpp"

#include "xxz/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace xxz {

namespace {

constexpr cplx I{0.0, 1.0};

bool kernel_vanishes(double eta)
{
    return std::abs(std::sin(2.0 * eta)) < 1e-15;
}

cplx coth(cplx z) { return std::cosh(z) / std::sinh(z); }

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Distance from an ordinate t to the nearest pole ordinate +-eta (mod pi).
double pole_ordinate_gap(double t, double eta)
{
    auto d = [](double u) {
        const double m = u - pi * std::round(u / pi);
        return std::abs(m);
    };
    return std::min(d(t - eta), d(t + eta));
}

} // namespace

std::optional<std::pair<int, int>> near_rational(double zeta, double tol, int max_den)
{
    const double x = zeta / pi;
    for (int q = 1; q <= max_den; ++q) {
        const int p = static_cast<int>(std::lround(x * q));
        if (std::abs(x - static_cast<double>(p) / q) < tol) return std::make_pair(p, q);
    }
    return std::nullopt;
}

KernelParams make_kernel_params(double zeta, double eta)
{
    if (!(zeta > 0.0 && zeta < pi))
        fail(ErrorKind::invalid_argument, "zeta must lie in (0, pi)");
    KernelParams kp;
    kp.zeta = zeta;
    kp.eta = eta;
    if (auto pq = near_rational(zeta)) {
        kp.near_rational = true;
        kp.num = pq->first;
        kp.den = pq->second;
    }
    return kp;
}

cplx kernel_k(cplx lambda, double eta, int deriv)
{
    if (kernel_vanishes(eta)) return 0.0;
    const cplx a = lambda + I * eta;
    const cplx b = lambda - I * eta;
    const cplx sa = std::sinh(a);
    const cplx sb = std::sinh(b);
    if (std::abs(sa) < 1e-12 || std::abs(sb) < 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "K(lambda|eta) evaluated within 1e-12 of a pole: lambda = " << lambda
           << ", eta = " << eta;
        fail(ErrorKind::pole_proximity, os.str());
    }
    const cplx k = std::sin(2.0 * eta) / (2.0 * pi * sa * sb);
    if (deriv == 0) return k;
    const cplx c = coth(a) + coth(b);
    const cplx k1 = -k * c;
    if (deriv == 1) return k1;
    if (deriv == 2) {
        const cplx csch2 = 1.0 / (sa * sa) + 1.0 / (sb * sb);
        return -k1 * c + k * csch2;
    }
    fail(ErrorKind::invalid_argument, "kernel_k: derivative order must be 0, 1 or 2");
}

cplx kernel_kr(cplx lambda, int r, double zeta, int deriv)
{
    if (r < 1) fail(ErrorKind::invalid_argument, "kernel_kr: r must be >= 1");
    return kernel_k(lambda, 0.5 * zeta * (r + 1), deriv) +
           kernel_k(lambda, 0.5 * zeta * (r - 1), deriv);
}

double hat(double w)
{
    return w - pi * std::floor(w / pi);
}

double bare_phase_1_line(double x, int sigma, double eta)
{
    if (kernel_vanishes(eta)) return 0.0;
    if (sigma == 0) return 2.0 * std::atan(std::tanh(x) / std::tan(eta));
    return -pi * sgn(std::sin(2.0 * eta)) - 2.0 * std::atan(std::tanh(x) * std::tan(eta));
}

double bare_phase_line(double x, int sigma, int r, double zeta)
{
    return bare_phase_1_line(x, sigma, 0.5 * zeta * (r + 1)) +
           bare_phase_1_line(x, sigma, 0.5 * zeta * (r - 1));
}

cplx bare_phase_1_path(cplx lambda, double eta)
{
    if (kernel_vanishes(eta)) return 0.0;
    const double y = lambda.imag();
    const double x = lambda.real();

    if (pole_ordinate_gap(y, eta) < 1e-12 && std::abs(x) < 1e-12) {
        std::ostringstream os;
        os.precision(17);
        os << "bare phase: endpoint lambda = " << lambda << " sits on a pole (eta = " << eta << ")";
        fail(ErrorKind::contour_failure, os.str());
    }

    // pole ordinates strictly between 0 and y on the imaginary axis
    std::vector<double> poles;
    if (y != 0.0) {
        const double lo = std::min(0.0, y);
        const double hi = std::max(0.0, y);
        for (double base : {eta, -eta}) {
            const double kmin = std::ceil((lo - base) / pi) - 1;
            const double kmax = std::floor((hi - base) / pi) + 1;
            for (double k = kmin; k <= kmax; k += 1.0) {
                const double t = base + k * pi;
                if (t > lo && t < hi) poles.push_back(t);
            }
        }
    }
    std::sort(poles.begin(), poles.end());
    if (y < 0.0) std::reverse(poles.begin(), poles.end());

    if (x != 0.0 && y != 0.0 && pole_ordinate_gap(y, eta) < 1e-12)
        fail(ErrorKind::contour_failure, "bare phase: horizontal leg starts on a pole");

    std::vector<cplx> sensitive;
    Polyline path;
    path.vertices.push_back(0.0);
    const double dir = y >= 0.0 ? 1.0 : -1.0;
    for (std::size_t k = 0; k < poles.size(); ++k) {
        const double t = poles[k];
        double gap = std::min(std::abs(t), std::abs(y - t));
        if (k > 0) gap = std::min(gap, std::abs(t - poles[k - 1]));
        if (k + 1 < poles.size()) gap = std::min(gap, std::abs(poles[k + 1] - t));
        if (gap < 1e-12) fail(ErrorKind::contour_failure, "bare phase: coincident poles on the path");
        const double rho = std::min(0.25, 0.45 * gap);
        // semicircle through the left half-plane, traversed in the direction of travel
        constexpr int n_arc = 24;
        for (int j = 0; j <= n_arc; ++j) {
            const double phi = -0.5 * pi - pi * j / n_arc;
            const cplx off = rho * cplx(std::cos(phi), dir * std::sin(phi));
            path.vertices.push_back(I * t + off);
        }
        sensitive.push_back(I * t);
    }
    if (y != 0.0) path.vertices.push_back(I * y);
    if (x != 0.0) path.vertices.push_back(lambda);
    if (path.vertices.size() < 2) return 0.0;

    // nearby poles off the imaginary axis segment still steer the grading
    for (double base : {eta, -eta}) {
        const double k0 = std::round((y - base) / pi);
        for (double k = k0 - 1; k <= k0 + 1; k += 1.0) sensitive.push_back(I * (base + k * pi));
    }

    auto f = [eta](cplx mu) { return kernel_k(mu, eta, 0); };
    return 2.0 * pi * integrate_path(f, path, 16, sensitive, 1.0);
}

cplx bare_phase_1(cplx lambda, double eta)
{
    if (kernel_vanishes(eta)) return 0.0;
    const double y = lambda.imag();
    if (y == 0.0) return bare_phase_1_line(lambda.real(), 0, eta);
    if (std::abs(std::abs(y) - 0.5 * pi) < 1e-15) return bare_phase_1_line(lambda.real(), 1, eta);
    return bare_phase_1_path(lambda, eta);
}

cplx bare_phase(cplx lambda, int r, double zeta)
{
    if (r < 1) fail(ErrorKind::invalid_argument, "bare_phase: r must be >= 1");
    return bare_phase_1(lambda, 0.5 * zeta * (r + 1)) + bare_phase_1(lambda, 0.5 * zeta * (r - 1));
}

int sgn_sin(int k, double zeta)
{
    const double s = std::sin(k * zeta);
    return s >= 0.0 ? 1 : -1;
}

StringCombinatorics string_combinatorics(int r, double zeta)
{
    if (r < 1) fail(ErrorKind::invalid_argument, "string_combinatorics: r must be >= 1");
    if (!(zeta > 0.0 && zeta < pi)) fail(ErrorKind::invalid_argument, "zeta must lie in (0, pi)");
    StringCombinatorics sc;
    sc.r = r;
    sc.ell_r = 1 - r + 2 * static_cast<int>(std::floor(r * zeta / (2.0 * pi)));
    int m = 2 - r - (r == 1 ? 1 : 0);
    for (int u : {+1, -1}) m += 2 * static_cast<int>(std::floor(zeta * (r + u) / (2.0 * pi)));
    sc.m_r = m;
    sc.kappa_r = static_cast<int>(std::floor((r - 1) * zeta / pi));
    sc.s_k.resize(r);
    for (int k = 1; k <= r; ++k) sc.s_k[k - 1] = sgn_sin(k, zeta);
    return sc;
}

} // namespace xxz
